#include "latdesign/theta.hpp"

#include <json.hpp>

#include <sstream>

#include "latdesign/errors.hpp"

namespace latdesign {

QSeries QSeries::one(const Rational& truncation) {
  QSeries s(truncation);
  s.add(Rational(0), Rational(1));
  return s;
}

Rational QSeries::coefficient(const Rational& exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void QSeries::add(const Rational& exponent, const Rational& value) {
  if (sgn(exponent) < 0) throw DomainError("q-series exponents must be nonnegative");
  if (exponent > truncation_ || value == 0) return;
  auto [it, inserted] = coeffs_.emplace(exponent, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coeffs_.erase(it);
  }
}

std::string QSeries::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : coeffs_) {
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    Rational mag = first ? c : Rational(abs(c));
    first = false;
    if (e == 0) {
      os << latdesign::to_string(mag);
      continue;
    }
    if (mag != 1) os << latdesign::to_string(mag) << '*';
    os << 'q';
    if (e != 1) os << '^' << latdesign::to_string(e);
  }
  return os.str();
}

std::string QSeries::to_json() const {
  nlohmann::json j;
  j["truncation"] = latdesign::to_string(truncation_);
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [e, v] : coeffs_) c[latdesign::to_string(e)] = latdesign::to_string(v);
  j["coefficients"] = std::move(c);
  return j.dump();
}

QSeries theta_series(const GramMatrix& q, const std::optional<HarmonicPoly>& p, const Rational& truncation,
                     const EnumerationLimits& limits) {
  if (sgn(truncation) <= 0) throw DomainError("theta truncation must be positive");
  if (p && p->coeff.dim() != q.dim()) throw DomainError("harmonic polynomial has the wrong dimension");
  QSeries s(truncation);
  if (!p) s.add(Rational(0), Rational(1));
  const LayerSpectrum spec = enumerate_layers(q, truncation * 2, limits);
  for (const auto& layer : spec.layers) {
    const Rational exponent = layer.norm / 2;
    if (p) {
      s.add(exponent, harmonic_moment(layer, *p));
    } else {
      s.add(exponent, Rational(static_cast<unsigned long>(layer.cardinality())));
    }
  }
  return s;
}

QSeries theta_product(const QSeries& a, const QSeries& b) {
  QSeries out(std::min(a.truncation(), b.truncation()));
  for (const auto& [ea, ca] : a.coefficients()) {
    if (ea > out.truncation()) break;
    for (const auto& [eb, cb] : b.coefficients()) {
      const Rational e = ea + eb;
      if (e > out.truncation()) break;
      out.add(e, ca * cb);
    }
  }
  return out;
}

std::vector<VanishingEntry> vanishing_report(const GramMatrix& q, int t, const Rational& truncation,
                                             const EnumerationLimits& limits) {
  if (t < 2 || t % 2 != 0) throw DomainError("vanishing_report needs an even t >= 2");
  if (q.dim() < 2) throw DomainError("vanishing_report needs dimension >= 2");
  const std::vector<HarmonicPoly> basis = harm2_basis(q);
  const LayerSpectrum spec = enumerate_layers(q, truncation * 2, limits);
  std::vector<VanishingEntry> out;
  // Homogeneous P of positive degree vanishes at the origin.
  out.push_back({Rational(0), true});
  for (const auto& layer : spec.layers) {
    bool vanish = true;
    const RationalMatrix m = moment_matrix(layer, q.dim());
    for (const auto& p : basis) {
      if (p.coeff.trace_product(m) != 0) {
        vanish = false;
        break;
      }
    }
    for (int r = 4; vanish && r <= t; r += 2) vanish = is_t_design(layer, q, r).is_design;
    out.push_back({layer.norm / 2, vanish});
  }
  return out;
}

}  // namespace latdesign
