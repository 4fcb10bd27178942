#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "latdesign/catalog.hpp"
#include "latdesign/errors.hpp"
#include "latdesign/modular.hpp"
#include "support.hpp"

using namespace latdesign;
using testsupport::descriptor;
using testsupport::gram;

namespace {

// Pairs (c, d) mod N with gcd(c, d, N) = 1: the bottom rows of SL2(Z/N),
// which number [SL2(Z) : Gamma1(N)] for N >= 3.
std::uint64_t primitive_pairs(std::uint64_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t c = 0; c < n; ++c)
    for (std::uint64_t d = 0; d < n; ++d)
      if (std::gcd(std::gcd(c, d), n) == 1) ++count;
  return count;
}

}  // namespace

TEST_CASE("index and Sturm bound") {
  CHECK(gamma1_index(1) == 1);
  CHECK(gamma1_index(2) == 3);
  CHECK(gamma1_index(4) == 12);
  CHECK(gamma1_index(20) == 288);
  for (std::uint64_t n = 3; n <= 120; ++n) CHECK_MESSAGE(gamma1_index(n) == primitive_pairs(n), n);
  CHECK(sturm_bound(5, 20) == 120);
  CHECK(sturm_bound(4, 3) == 3);
  CHECK(sturm_bound(12, 1) == 1);
  CHECK(sturm_bound(1, 12) == 8);
  CHECK_THROWS_AS(gamma1_index(0), DomainError);
}

TEST_CASE("Sturm bound dominates the tabulated pivot") {
  for (const auto& e : load_catalog().entries()) {
    const FullyCriticalReport r = fully_critical(e, FullyCriticalOptions{std::uint64_t{1}});
    REQUIRE(e.reference_N);
    CHECK_MESSAGE(r.sturm_B >= static_cast<std::uint64_t>(*e.reference_N), e.label());
  }
}

TEST_CASE("ste10a with the tabulated bound") {
  const LatticeDescriptor& e = *load_catalog().find("ste10a");
  const FullyCriticalReport r = fully_critical(e, FullyCriticalOptions{std::uint64_t{60}});
  CHECK(r.verdict == Verdict::FullyCritical);
  CHECK(r.doubled);
  CHECK_FALSE(r.augmented_with_A1);
  CHECK(r.level == 20);
  CHECK(r.weight == 5);
  CHECK(r.sturm_B == 120);
  CHECK(r.target_norm == 60);
  REQUIRE(r.per_layer.size() == 58);
  CHECK(r.per_layer.front().norm == 3);
  CHECK(r.per_layer.front().half_lhs() == 150);
  CHECK(r.per_layer.back().norm == 60);
  CHECK(r.per_layer.back().half_lhs() == Rational(4118640000UL));
  CHECK(r.exit_code() == 0);
}

TEST_CASE("failures") {
  const FullyCriticalReport r = fully_critical(descriptor(gram({{1, 0}, {0, 2}})));
  CHECK(r.verdict == Verdict::Failure);
  CHECK(r.doubled);
  CHECK(*r.failure_norm == 1);
  CHECK(*r.failure_working_norm == 2);
  CHECK(r.per_layer.back().lhs == 4);
  CHECK(r.per_layer.back().rhs == 2);
  CHECK(r.exit_code() == 1);
  const FullyCriticalReport d = fully_critical(descriptor(gram({{2, 0}, {0, 4}})));
  CHECK(d.verdict == Verdict::Failure);
  CHECK_FALSE(d.doubled);
  CHECK(*d.failure_norm == 2);
  CHECK_THROWS_AS(fully_critical(descriptor(GramMatrix::diagonal({Rational(1, 2), Rational(1)}))), DomainError);
}

TEST_CASE("budget gives an inconclusive verdict") {
  FullyCriticalOptions o;
  o.limits.max_vectors = 50;
  const FullyCriticalReport r = fully_critical(*load_catalog().find("ste10a"), o);
  CHECK(r.verdict == Verdict::Inconclusive);
  CHECK(r.certified_norm < r.target_norm);
  CHECK(r.exit_code() == 2);
}

TEST_CASE("small catalog entries in Sturm mode") {
  for (std::size_t n : {2, 3, 4}) {
    for (const auto* e : load_catalog().of_dimension(n)) {
      const FullyCriticalReport r = fully_critical(*e);
      CHECK_MESSAGE(r.verdict == Verdict::FullyCritical, e->label());
      CHECK(r.augmented_with_A1 == (n % 2 == 1));
      // A larger bound never changes a sound certificate.
      const FullyCriticalReport more = fully_critical(*e, FullyCriticalOptions{r.bound_B + 7});
      CHECK(more.verdict == r.verdict);
      // Gratuitous augmentation with A1 in even dimension.
      FullyCriticalOptions odd;
      odd.force_A1_route = true;
      if (n % 2 == 0) CHECK(fully_critical(*e, odd).verdict == Verdict::FullyCritical);
    }
  }
}

TEST_CASE("unimodular invariance of the verdict") {
  std::mt19937_64 rng(41);
  std::vector<GramMatrix> bases = {gram({{1, 0}, {0, 2}}), gram({{2, 1}, {1, 3}})};
  for (const auto* e : load_catalog().of_dimension(4)) bases.push_back(e->gram);
  for (const auto& q : bases) {
    const auto u = testsupport::random_unimodular(q.dim(), rng, 10);
    const FullyCriticalReport a = fully_critical(descriptor(q), FullyCriticalOptions{std::uint64_t{8}});
    const FullyCriticalReport b = fully_critical(descriptor(change_basis(q, u)), FullyCriticalOptions{std::uint64_t{8}});
    CHECK(a.verdict == b.verdict);
    CHECK(a.level == b.level);
  }
}

TEST_CASE("conjecture probe") {
  for (std::size_t n : {2, 3, 4}) {
    for (const auto* e : load_catalog().of_dimension(n)) {
      const ConjectureProbe p = conjecture_probe(*e);
      CHECK(p.first_two_designs);
      CHECK(p.fully_critical);
      CHECK_FALSE(p.counterexample());
    }
  }
  for (const auto& q : {gram({{1, 0}, {0, 2}}), gram({{1, 0, 0}, {0, 1, 0}, {0, 0, 2}})}) {
    const ConjectureProbe p = conjecture_probe(descriptor(q));
    CHECK_FALSE(p.first_two_designs);
    CHECK_FALSE(p.fully_critical);
    CHECK_FALSE(p.verdict.has_value());
  }
  const auto two = first_layers(load_catalog().find("ste10a")->gram, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].norm == 3);
  CHECK(two[1].norm == 4);
}
