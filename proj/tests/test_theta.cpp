#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <random>

#include "latdesign/catalog.hpp"
#include "latdesign/errors.hpp"
#include "latdesign/theta.hpp"
#include "support.hpp"

using namespace latdesign;
using testsupport::gram;

namespace {

// Theta series straight from box enumeration.
QSeries box_theta(const GramMatrix& q, const Rational& truncation) {
  QSeries s = QSeries::one(truncation);
  for (const auto& [m, v] : testsupport::box_layers(q, truncation * 2))
    s.add(m / 2, Rational(static_cast<unsigned long>(v.size())));
  return s;
}

}  // namespace

TEST_CASE("series basics") {
  QSeries s(5);
  s.add(1, 2);
  s.add(1, -2);
  CHECK(s.is_zero());
  s.add(6, 1);
  CHECK(s.is_zero());
  CHECK_THROWS_AS(s.add(-1, 1), DomainError);
  s.add(Rational(1, 2), 3);
  s.add(0, 1);
  CHECK(s.to_string() == "1 + 3*q^1/2");
  const auto j = nlohmann::json::parse(s.to_json());
  CHECK(j["truncation"] == "5");
  CHECK(j["coefficients"]["1/2"] == "3");
  CHECK(theta_product(s, QSeries::one(5)) == s);
}

TEST_CASE("A1 and A2") {
  const GramMatrix a1 = gram({{2}});
  const QSeries t = theta_series(a1, std::nullopt, 9);
  CHECK(t.to_string() == "1 + 2*q + 2*q^4 + 2*q^9");
  const QSeries a2 = theta_series(gram({{2, 1}, {1, 2}}), std::nullopt, 2);
  CHECK(a2.coefficient(1) == 6);
  CHECK(a2.coefficient(2) == 0);
}

TEST_CASE("coefficients are the layer cardinalities") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const GramMatrix q = testsupport::random_form(1 + k % 4, rng);
    CHECK(theta_series(q, std::nullopt, 12) == box_theta(q, 12));
  }
  for (const auto& e : load_catalog().of_dimension(4)) CHECK(theta_series(e->gram, std::nullopt, 8) == box_theta(e->gram, 8));
}

TEST_CASE("product identity") {
  const GramMatrix a1 = gram({{2}});
  const GramMatrix a2 = gram({{2, 1}, {1, 2}});
  CHECK(theta_product(theta_series(a2, std::nullopt, 25), theta_series(a1, std::nullopt, 25)) ==
        theta_series(orthogonal_sum(a2, a1), std::nullopt, 25));
  CHECK(theta_product(theta_series(a1, std::nullopt, 25), theta_series(a1, std::nullopt, 25)) ==
        theta_series(orthogonal_sum(a1, a1), std::nullopt, 25));
  std::mt19937_64 rng(37);
  for (int k = 0; k < 8; ++k) {
    const GramMatrix p = testsupport::random_form(1 + k % 2, rng), q = testsupport::random_form(1 + k % 3, rng);
    CHECK(theta_product(theta_series(p, std::nullopt, 10), theta_series(q, std::nullopt, 10)) ==
          theta_series(orthogonal_sum(p, q), std::nullopt, 10));
  }
}

TEST_CASE("harmonic theta series") {
  const GramMatrix z2x2 = gram({{2, 0}, {0, 2}});
  for (const auto& p : harm2_basis(z2x2)) CHECK(theta_series(z2x2, p, 20).is_zero());
  const GramMatrix d12 = gram({{1, 0}, {0, 2}});
  const HarmonicPoly diff{RationalMatrix(2, {1, 0, 0, -1})};
  CHECK(theta_series(d12, diff, 1).coefficient(Rational(1, 2)) == 2);
}

TEST_CASE("vanishing reports") {
  const GramMatrix w = doubled(load_catalog().find("ste10a")->gram);
  const auto rep = vanishing_report(w, 2, 60);
  CHECK(rep.front().exponent == 0);
  CHECK(rep.front().all_vanish);
  std::size_t nonempty = 0;
  for (const auto& e : rep) {
    CHECK(e.all_vanish);
    ++nonempty;
  }
  CHECK(nonempty == 59);  // exponents 0 and 3..60

  const auto bad = vanishing_report(gram({{2, 0}, {0, 4}}), 2, 5);
  REQUIRE(bad.size() > 1);
  CHECK(bad[1].exponent == 1);
  CHECK_FALSE(bad[1].all_vanish);

  // Agreement with per-layer design verdicts, including t = 4.
  for (const char* name : {"sta3", "stc12", "stb4", "stc4"}) {
    const GramMatrix& q = load_catalog().find(name)->gram;
    const auto r = vanishing_report(q, 4, 10);
    const LayerSpectrum s = enumerate_layers(q, 20);
    REQUIRE(r.size() == s.layers.size() + 1);
    for (std::size_t i = 0; i < s.layers.size(); ++i)
      CHECK(r[i + 1].all_vanish == (is_t_design(s.layers[i], q, 2).is_design && is_t_design(s.layers[i], q, 4).is_design));
  }
}
