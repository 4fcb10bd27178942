#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latdesign/design.hpp"
#include "latdesign/gram.hpp"
#include "latdesign/layers.hpp"
#include "latdesign/rational.hpp"

namespace latdesign {

/// Truncated q-expansion: exponent (a nonnegative rational, in q = e^{2 pi i tau})
/// to exact coefficient.  Zero coefficients are not stored; every stored
/// exponent is <= truncation().
class QSeries {
 public:
  explicit QSeries(Rational truncation) : truncation_(std::move(truncation)) {}

  /// The constant series 1 known to the given precision.
  static QSeries one(const Rational& truncation);

  const Rational& truncation() const noexcept { return truncation_; }
  const std::map<Rational, Rational>& coefficients() const noexcept { return coeffs_; }

  Rational coefficient(const Rational& exponent) const;
  /// Adds `value` to the coefficient at `exponent`; terms above the
  /// truncation are dropped.
  void add(const Rational& exponent, const Rational& value);

  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// "c0 + c1*q^e1 + ..." with zero terms omitted ("0" for the zero series).
  std::string to_string() const;
  /// {"truncation": "T", "coefficients": {"e": "c", ...}}
  std::string to_json() const;

  friend bool operator==(const QSeries& a, const QSeries& b) {
    return a.truncation_ == b.truncation_ && a.coeffs_ == b.coeffs_;
  }

 private:
  Rational truncation_;
  std::map<Rational, Rational> coeffs_;
};

/// theta_{Q,P} up to q^T: the coefficient of q^{m/2} is the sum of P over the
/// norm-m layer (the layer cardinality when P is absent, i.e. P = 1, plus the
/// constant term 1).
QSeries theta_series(const GramMatrix& q, const std::optional<HarmonicPoly>& p, const Rational& truncation,
                     const EnumerationLimits& limits = {});

/// Cauchy product truncated to min(T_a, T_b).
QSeries theta_product(const QSeries& a, const QSeries& b);

struct VanishingEntry {
  Rational exponent;
  bool all_vanish = false;
};

/// For exponent 0 and each nonempty layer up to q^T: whether the coefficient
/// of theta_{Q,P} vanishes for every harmonic P of even degree 2..t.  Degree 2
/// is checked through the harmonic basis of Q; higher degrees through the
/// pair-power-sum criterion.
std::vector<VanishingEntry> vanishing_report(const GramMatrix& q, int t, const Rational& truncation,
                                             const EnumerationLimits& limits = {});

}  // namespace latdesign
