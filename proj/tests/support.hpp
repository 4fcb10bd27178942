#pragma once

// Independent oracles shared by the unit tests.  Nothing here calls the
// enumeration or design code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "latdesign/gram.hpp"

namespace testsupport {

using latdesign::GramMatrix;
using latdesign::IntVec;
using latdesign::Rational;

inline GramMatrix gram(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : rows) {
    std::vector<Rational> out;
    for (long v : row) out.emplace_back(v);
    r.push_back(std::move(out));
  }
  return GramMatrix::from_rows(r);
}

inline latdesign::LatticeDescriptor descriptor(const GramMatrix& g) {
  return latdesign::LatticeDescriptor{std::nullopt, g, std::nullopt, std::nullopt, std::nullopt, false, std::nullopt};
}

// x^t Q x with plain rationals.
inline Rational norm_of(const GramMatrix& q, const IntVec& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += q(i, j) * Rational(x[i] * x[j]);
  return s;
}

inline Rational inner_of(const GramMatrix& q, const IntVec& x, const IntVec& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += q(i, j) * Rational(x[i] * y[j]);
  return s;
}

// All nonzero x with Q[x] <= bound, by scanning the box |x_i| <= sqrt(bound (Q^{-1})_ii).
inline std::map<Rational, std::vector<IntVec>> box_layers(const GramMatrix& q, const Rational& bound) {
  const std::size_t n = q.dim();
  const GramMatrix qi = latdesign::gram_inverse(q);
  std::vector<long> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<long>(std::floor(std::sqrt(Rational(bound * qi(i, i)).get_d()) + 1e-9));
  std::map<Rational, std::vector<IntVec>> out;
  IntVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = -r[i];
  for (;;) {
    bool zero = true;
    for (auto v : x) zero = zero && v == 0;
    if (!zero) {
      Rational m = norm_of(q, x);
      if (m <= bound) out[m].push_back(x);
    }
    std::size_t k = 0;
    while (k < n && x[k] == r[k]) {
      x[k] = -r[k];
      ++k;
    }
    if (k == n) break;
    ++x[k];
  }
  for (auto& [m, v] : out) std::sort(v.begin(), v.end());
  return out;
}

// Q = A^t A + I with small random integer A.
inline GramMatrix random_form(std::size_t n, std::mt19937_64& rng, int spread = 2) {
  std::uniform_int_distribution<int> e(-spread, spread);
  std::vector<std::vector<long>> a(n, std::vector<long>(n));
  for (auto& row : a)
    for (auto& v : row) v = e(rng);
  std::vector<std::vector<long>> q(n, std::vector<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long s = i == j ? 1 : 0;
      for (std::size_t k = 0; k < n; ++k) s += a[k][i] * a[k][j];
      q[i][j] = s;
    }
  return gram(q);
}

// Product of random elementary transvections: a unimodular integer matrix (rows).
inline std::vector<IntVec> random_unimodular(std::size_t n, std::mt19937_64& rng, int steps = 6) {
  std::vector<IntVec> u(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> c(-1, 1);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    const int k = c(rng);
    // column i += k * column j
    for (std::size_t r = 0; r < n; ++r) u[r][i] += k * u[r][j];
  }
  return u;
}

inline IntVec apply(const std::vector<IntVec>& u, const IntVec& y) {
  IntVec x(y.size(), 0);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) x[i] += u[i][j] * y[j];
  return x;
}

}  // namespace testsupport
