#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace latdesign {

using Integer = mpz_class;
using Rational = mpq_class;

/// Integer coordinate vector of a lattice point.
using IntVec = std::vector<std::int64_t>;

/// Parses "p", "-p" or "p/q" into a canonicalized rational.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is one, "p/q" otherwise.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

Integer from_int128(__int128 value);

/// Dense square matrix of exact rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t n) : n_(n), a_(n * n) {}
  RationalMatrix(std::size_t n, std::vector<Rational> row_major);

  static RationalMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return n_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

  const std::vector<Rational>& data() const noexcept { return a_; }

  bool is_symmetric() const;
  Rational trace() const;

  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& other) const;
  RationalMatrix operator+(const RationalMatrix& other) const;
  RationalMatrix operator-(const RationalMatrix& other) const;
  RationalMatrix scaled(const Rational& c) const;

  /// Tr(A B), the trace inner product.
  Rational trace_product(const RationalMatrix& other) const;

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Rational> a_;
};

}  // namespace latdesign
