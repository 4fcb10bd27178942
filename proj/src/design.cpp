#include "latdesign/design.hpp"

#include <cmath>
#include <stdexcept>

#include "latdesign/errors.hpp"

namespace latdesign {

namespace {

void check_even_t(int t) {
  if (t <= 0 || t % 2 != 0) throw DomainError("design strength t must be a positive even integer");
}

// Numerator and denominator of (1*3*...*(t-1)) / (n(n+2)...(n+t-2)).
std::pair<Integer, Integer> design_ratio(int n, int t) {
  Integer num = 1, den = 1;
  for (int k = 1; k <= t - 1; k += 2) num *= k;
  for (int k = 0; k < t / 2; ++k) den *= n + 2 * k;
  return {num, den};
}

unsigned __int128 pow_u128(unsigned __int128 base, int e) {
  unsigned __int128 r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

Integer from_u128(unsigned __int128 v) {
  Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

// log2 upper bound of a nonnegative integer.
double log2_of(const Integer& v) { return v == 0 ? 0.0 : static_cast<double>(mpz_sizeinbase(v.get_mpz_t(), 2)); }

}  // namespace

Rational HarmonicPoly::evaluate(std::span<const std::int64_t> x) const {
  Rational acc = 0;
  const std::size_t n = coeff.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (x[i] == 0 || x[j] == 0) continue;
      acc += coeff(i, j) * Rational(static_cast<long>(x[i] * x[j]));
    }
  return acc;
}

Rational design_constant(int n, int t, std::size_t size) {
  check_even_t(t);
  if (n < 1) throw DomainError("dimension must be positive");
  auto [num, den] = design_ratio(n, t);
  Rational c(num * Integer(static_cast<unsigned long>(size)), den);
  c.canonicalize();
  return c;
}

Rational pair_power_sum(const Layer& layer, const GramMatrix& q, int t) {
  check_even_t(t);
  const std::size_t n = q.dim();
  const std::vector<IntVec> half = half_layer(layer);
  const std::size_t h = half.size();
  if (h == 0) return 0;

  // Images (dQ) x for each representative.
  const auto& qs = q.scaled_entries();
  std::vector<std::vector<Integer>> images(h, std::vector<Integer>(n));
  for (std::size_t a = 0; a < h; ++a)
    for (std::size_t i = 0; i < n; ++i) {
      Integer acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += qs[i * n + j] * Integer(static_cast<long>(half[a][j]));
      images[a][i] = acc;
    }

  // |x . y| <= Q[x] for vectors of equal norm, so the scaled inner products
  // are bounded by the scaled norm.
  const Rational scaled_norm_q = layer.norm * q.denominator();
  const Integer scaled_norm = abs(scaled_norm_q.get_num());
  const double bits = t * log2_of(scaled_norm) + 2.0 * std::log2(static_cast<double>(h)) + 2.0;
  bool small_images = true;
  for (const auto& img : images)
    for (const auto& v : img)
      if (!v.fits_slong_p()) small_images = false;

  Integer total;
  if (small_images && bits < 125.0) {
    std::vector<std::vector<std::int64_t>> w(h, std::vector<std::int64_t>(n));
    for (std::size_t a = 0; a < h; ++a)
      for (std::size_t i = 0; i < n; ++i) w[a][i] = images[a][i].get_si();
    unsigned __int128 diag = 0, off = 0;
    for (std::size_t a = 0; a < h; ++a) {
      const auto& wa = w[a];
      for (std::size_t b = a; b < h; ++b) {
        __int128 p = 0;
        for (std::size_t i = 0; i < n; ++i) p += static_cast<__int128>(wa[i]) * half[b][i];
        const unsigned __int128 mag = p < 0 ? static_cast<unsigned __int128>(-p) : static_cast<unsigned __int128>(p);
        const unsigned __int128 term = pow_u128(mag, t);
        if (a == b) {
          diag += term;
        } else {
          off += term;
        }
      }
    }
    total = from_u128(diag) + 2 * from_u128(off);
  } else {
    Integer diag = 0, off = 0, p, term;
    for (std::size_t a = 0; a < h; ++a)
      for (std::size_t b = a; b < h; ++b) {
        p = 0;
        for (std::size_t i = 0; i < n; ++i) p += images[a][i] * Integer(static_cast<long>(half[b][i]));
        mpz_pow_ui(term.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(t));
        if (a == b) {
          diag += term;
        } else {
          off += term;
        }
      }
    total = diag + 2 * off;
  }
  Integer den_t;
  mpz_pow_ui(den_t.get_mpz_t(), q.denominator().get_mpz_t(), static_cast<unsigned long>(t));
  Rational out(4 * total, den_t);
  out.canonicalize();
  return out;
}

Rational design_rhs(int n, int t, const Rational& norm, std::size_t size) {
  check_even_t(t);
  auto [num, den] = design_ratio(n, t);
  Rational mt;
  mpz_pow_ui(mt.get_num_mpz_t(), norm.get_num_mpz_t(), static_cast<unsigned long>(t));
  mpz_pow_ui(mt.get_den_mpz_t(), norm.get_den_mpz_t(), static_cast<unsigned long>(t));
  const Integer s(static_cast<unsigned long>(size));
  Rational rhs = Rational(num * s * s, den) * mt;
  rhs.canonicalize();
  return rhs;
}

namespace {

DesignVerdict compare(const Rational& norm, int t, Rational lhs, Rational rhs) {
  DesignVerdict v{norm, t, std::move(lhs), std::move(rhs), false};
  // Cross-multiplied comparison of lhs = a/b against rhs = c/e.
  const Integer left = v.lhs.get_num() * v.rhs.get_den();
  const Integer right = v.rhs.get_num() * v.lhs.get_den();
  if (left < right) {
    throw std::logic_error("pair power sum below the design bound on layer " + to_string(norm) +
                           ": the Q-inner-product model is broken");
  }
  v.is_design = left == right;
  return v;
}

}  // namespace

DesignVerdict is_t_design(const Layer& layer, const GramMatrix& q, int t) {
  check_even_t(t);
  return compare(layer.norm, t, pair_power_sum(layer, q, t),
                 design_rhs(static_cast<int>(q.dim()), t, layer.norm, layer.cardinality()));
}

Rational pair_power_sum_2(const RationalMatrix& moment, const GramMatrix& q) {
  const RationalMatrix qm = q.matrix() * moment;
  return qm.trace_product(qm);
}

DesignVerdict is_2_design(const LayerMoment& layer, const GramMatrix& q) {
  return compare(layer.norm, 2, pair_power_sum_2(layer.moment, q),
                 design_rhs(static_cast<int>(q.dim()), 2, layer.norm, layer.count));
}

RationalMatrix moment_matrix(const Layer& layer, std::size_t n) {
  std::vector<__int128> acc(n * n, 0);
  for (const auto& x : layer.vectors)
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) acc[i * n + j] += static_cast<__int128>(x[i]) * x[j];
    }
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Rational(from_int128(acc[i * n + j]));
  return m;
}

bool is_2_design_moment(const Layer& layer, const GramMatrix& q) {
  const std::size_t n = q.dim();
  const RationalMatrix lhs = moment_matrix(layer, n).scaled(Rational(static_cast<long>(n)));
  const RationalMatrix rhs =
      inverse(q.matrix()).scaled(layer.norm * Rational(static_cast<unsigned long>(layer.cardinality())));
  return lhs == rhs;
}

Rational harmonic_moment(const Layer& layer, const HarmonicPoly& p) {
  return p.coeff.trace_product(moment_matrix(layer, p.coeff.dim()));
}

std::vector<HarmonicPoly> harm2_basis(std::size_t n) {
  if (n < 2) throw DomainError("degree-2 harmonic basis needs n >= 2");
  std::vector<HarmonicPoly> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RationalMatrix p(n);
      p(i, j) = 1;
      p(j, i) = 1;
      out.push_back({std::move(p)});
    }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    RationalMatrix p(n);
    p(i, i) = 1;
    p(i + 1, i + 1) = -1;
    out.push_back({std::move(p)});
  }
  return out;
}

std::vector<HarmonicPoly> harm2_basis(const GramMatrix& q) {
  const std::size_t n = q.dim();
  if (n < 2) throw DomainError("degree-2 harmonic basis needs n >= 2");
  const RationalMatrix qi = inverse(q.matrix());
  std::vector<HarmonicPoly> out;
  auto add = [&](RationalMatrix b) {
    // Remove the component along E_00 that carries the Q^{-1}-trace.
    const Rational shift = qi.trace_product(b) / qi(0, 0);
    b(0, 0) -= shift;
    out.push_back({std::move(b)});
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RationalMatrix b(n);
      b(i, j) = 1;
      b(j, i) = 1;
      add(std::move(b));
    }
  for (std::size_t i = 1; i < n; ++i) {
    RationalMatrix b(n);
    b(i, i) = 1;
    add(std::move(b));
  }
  return out;
}

bool is_harmonic_for(const HarmonicPoly& p, const GramMatrix& q) {
  return inverse(q.matrix()).trace_product(p.coeff) == 0;
}

}  // namespace latdesign
