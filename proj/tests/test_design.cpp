#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "latdesign/catalog.hpp"
#include "latdesign/design.hpp"
#include "latdesign/errors.hpp"
#include "latdesign/layers.hpp"
#include "support.hpp"

using namespace latdesign;
using testsupport::gram;

namespace {

// Sum over all ordered pairs of the full layer, no symmetry used.
Rational brute_pair_sum(const Layer& l, const GramMatrix& q, int t) {
  Rational s = 0;
  for (const auto& x : l.vectors)
    for (const auto& y : l.vectors) {
      const Rational p = testsupport::inner_of(q, x, y);
      Rational pw = 1;
      for (int k = 0; k < t; ++k) pw *= p;
      s += pw;
    }
  return s;
}

Layer layer_of(const GramMatrix& q, const Rational& m) {
  const LayerSpectrum s = enumerate_layers(q, m);
  const Layer* l = s.find(m);
  REQUIRE(l != nullptr);
  return *l;
}

bool harmonics_vanish(const Layer& l, const GramMatrix& q) {
  for (const auto& p : harm2_basis(q))
    if (harmonic_moment(l, p) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("design constant") {
  CHECK(design_constant(5, 2, 10) == 2);
  CHECK(design_constant(2, 4, 6) == Rational(9, 4));
  CHECK(design_constant(6, 2, 10) == Rational(5, 3));
  CHECK_THROWS_AS(design_constant(3, 3, 4), DomainError);
  CHECK_THROWS_AS(design_constant(3, 0, 4), DomainError);
}

TEST_CASE("pair power sums") {
  const GramMatrix z2 = GramMatrix::identity(2);
  CHECK(pair_power_sum(layer_of(z2, 1), z2, 2) == 8);
  const GramMatrix d12 = gram({{1, 0}, {0, 2}});
  CHECK(pair_power_sum(layer_of(d12, 1), d12, 2) == 4);
  const GramMatrix a2 = gram({{2, 1}, {1, 2}});
  CHECK(pair_power_sum(layer_of(a2, 2), a2, 2) == 72);
  const GramMatrix& ste10a = load_catalog().find("ste10a")->gram;
  const DesignVerdict v3 = is_t_design(layer_of(ste10a, 3), ste10a, 2);
  CHECK(v3.half_lhs() == 150);
  CHECK(v3.half_rhs() == 150);
  const DesignVerdict v4 = is_t_design(layer_of(ste10a, 4), ste10a, 2);
  CHECK(v4.is_design);
  CHECK(v4.half_lhs() == 600);
}

TEST_CASE("pair power sum against the full double loop") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 25; ++k) {
    const GramMatrix q = testsupport::random_form(2 + k % 3, rng);
    for (const auto& l : enumerate_layers(q, 12).layers)
      for (int t : {2, 4, 6}) CHECK(pair_power_sum(l, q, t) == brute_pair_sum(l, q, t));
  }
  const GramMatrix r = GramMatrix::from_rows({{Rational(1, 2), Rational(1, 3)}, {Rational(1, 3), Rational(5, 4)}});
  for (const auto& l : enumerate_layers(r, 5).layers) CHECK(pair_power_sum(l, r, 2) == brute_pair_sum(l, r, 2));
}

TEST_CASE("verdicts") {
  const GramMatrix d12 = gram({{1, 0}, {0, 2}});
  const DesignVerdict v = is_t_design(layer_of(d12, 1), d12, 2);
  CHECK_FALSE(v.is_design);
  CHECK(v.lhs == 4);
  CHECK(v.rhs == 2);
  const GramMatrix a2 = gram({{2, 1}, {1, 2}});
  const DesignVerdict w = is_t_design(layer_of(a2, 2), a2, 2);
  CHECK(w.is_design);
  CHECK(w.lhs == 72);
  CHECK(w.rhs == 72);
  // Hexagon and D4 roots are 4-designs, the square is not.
  CHECK(is_t_design(layer_of(a2, 2), a2, 4).is_design);
  CHECK(is_t_design(layer_of(load_catalog().find("stc12")->gram, 2), load_catalog().find("stc12")->gram, 4).is_design);
  const GramMatrix z2 = GramMatrix::identity(2);
  CHECK_FALSE(is_t_design(layer_of(z2, 1), z2, 4).is_design);
  CHECK(is_t_design(layer_of(z2, 1), z2, 2).is_design);
}

TEST_CASE("moment matrix") {
  const GramMatrix z2 = GramMatrix::identity(2);
  CHECK(moment_matrix(layer_of(z2, 1), 2) == RationalMatrix(2, {2, 0, 0, 2}));
  CHECK(moment_matrix(layer_of(z2, 5), 2) == RationalMatrix(2, {20, 0, 0, 20}));
  const GramMatrix a2 = gram({{2, 1}, {1, 2}});
  const RationalMatrix m = moment_matrix(layer_of(a2, 2), 2);
  CHECK(m == RationalMatrix(2, {4, -2, -2, 4}));
  CHECK(is_2_design_moment(layer_of(z2, 1), z2));
  CHECK_FALSE(is_2_design_moment(layer_of(gram({{1, 0}, {0, 2}}), 1), gram({{1, 0}, {0, 2}})));
  const GramMatrix& ste10a = load_catalog().find("ste10a")->gram;
  CHECK(is_2_design_moment(layer_of(ste10a, 3), ste10a));
}

TEST_CASE("harmonic bases") {
  CHECK(harm2_basis(2).size() == 2);
  CHECK(harm2_basis(6).size() == 20);
  for (const auto& p : harm2_basis(6)) CHECK(p.coeff.trace() == 0);
  const GramMatrix z2 = GramMatrix::identity(2);
  const HarmonicPoly diff{RationalMatrix(2, {1, 0, 0, -1})};
  const HarmonicPoly cross{RationalMatrix(2, {0, 1, 1, 0})};
  CHECK(harmonic_moment(layer_of(z2, 1), diff) == 0);
  CHECK(harmonic_moment(layer_of(z2, 2), cross) == 0);
  CHECK(harmonic_moment(layer_of(gram({{1, 0}, {0, 2}}), 1), diff) == 2);
  for (const auto& e : load_catalog().entries()) {
    const auto basis = harm2_basis(e.gram);
    const std::size_t n = e.gram.dim();
    CHECK(basis.size() == n * (n + 1) / 2 - 1);
    for (const auto& p : basis) CHECK(is_harmonic_for(p, e.gram));
  }
}

TEST_CASE("route agreement") {
  auto check_all = [](const GramMatrix& q, const Rational& bound) {
    const LayerSpectrum s = enumerate_layers(q, bound);
    const auto streamed = layer_moments(q, bound);
    REQUIRE(streamed.size() == s.layers.size());
    for (std::size_t i = 0; i < s.layers.size(); ++i) {
      const Layer& l = s.layers[i];
      const DesignVerdict direct = is_t_design(l, q, 2);
      const DesignVerdict moment = is_2_design(streamed[i], q);
      CHECK(direct.lhs == moment.lhs);
      CHECK(direct.rhs == moment.rhs);
      CHECK(direct.is_design == is_2_design_moment(l, q));
      CHECK(direct.is_design == harmonics_vanish(l, q));
      // The sum over antipodal sets never drops below the design value.
      CHECK(direct.lhs >= direct.rhs);
      for (int t : {4, 6}) {
        const DesignVerdict h = is_t_design(l, q, t);
        CHECK(h.lhs >= h.rhs);
      }
    }
  };
  for (const auto& e : load_catalog().entries()) {
    CAPTURE(e.label());
    check_all(e.gram, e.gram.dim() <= 5 ? 16 : 8);
  }
  std::mt19937_64 rng(17);
  for (int k = 0; k < 30; ++k) check_all(testsupport::random_form(2 + k % 3, rng), 15);
}

TEST_CASE("scaling and unimodular invariance") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 12; ++k) {
    const std::size_t n = 2 + k % 3;
    GramMatrix q = k < 6 ? testsupport::random_form(n, rng) : load_catalog().of_dimension(n == 3 ? 3 : 4)[k % 3]->gram;
    const GramMatrix q2 = doubled(q);
    const auto u = testsupport::random_unimodular(q.dim(), rng, 8);
    const GramMatrix p = change_basis(q, u);
    const LayerSpectrum a = enumerate_layers(q, 12), b = enumerate_layers(q2, 24), c = enumerate_layers(p, 12);
    REQUIRE(a.layers.size() == b.layers.size());
    REQUIRE(a.layers.size() == c.layers.size());
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
      const bool va = is_t_design(a.layers[i], q, 2).is_design;
      CHECK(va == is_t_design(b.layers[i], q2, 2).is_design);
      CHECK(va == is_t_design(c.layers[i], p, 2).is_design);
      // x in a layer of p maps to U x in the same layer of q.
      for (const auto& y : c.layers[i].vectors)
        CHECK(testsupport::norm_of(q, testsupport::apply(u, y)) == a.layers[i].norm);
    }
  }
}
