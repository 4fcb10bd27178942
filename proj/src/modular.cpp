#include "latdesign/modular.hpp"

#include <cmath>

#include "latdesign/errors.hpp"

namespace latdesign {

std::uint64_t gamma1_index(std::uint64_t level) {
  if (level == 0) throw DomainError("level must be positive");
  if (level == 1) return 1;
  if (level == 2) return 3;
  // N^2 prod (1 - 1/p^2) = prod over prime powers p^e || N of p^{2e-2} (p^2 - 1).
  std::uint64_t index = 1;
  std::uint64_t rest = level;
  for (std::uint64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    std::uint64_t pe = 1;
    while (rest % p == 0) {
      rest /= p;
      pe *= p;
    }
    index *= (pe / p) * (pe / p) * (p * p - 1);
  }
  if (rest > 1) index *= rest * rest - 1;
  return index;
}

std::uint64_t sturm_bound(std::uint64_t weight, std::uint64_t level) {
  if (weight == 0) throw DomainError("weight must be positive");
  const std::uint64_t num = weight * gamma1_index(level);
  return (num + 11) / 12;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::FullyCritical: return "fully-critical";
    case Verdict::Failure: return "failure";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

int FullyCriticalReport::exit_code() const {
  switch (verdict) {
    case Verdict::FullyCritical: return 0;
    case Verdict::Failure: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

namespace {

// Largest integral norm bound whose estimated vector count fits the budget.
// An underestimate is caught by BudgetExceeded below.
Rational affordable_bound(const GramMatrix& q, const Rational& target, std::size_t budget) {
  const double est = estimate_vector_count(q, target);
  const double allowed = static_cast<double>(budget);
  if (est <= allowed) return target;
  const double shrink = std::pow(allowed / est, 2.0 / static_cast<double>(q.dim()));
  const double b = std::floor(target.get_d() * shrink);
  return Rational(static_cast<long>(std::max(b, 0.0)));
}

}  // namespace

FullyCriticalReport fully_critical(const LatticeDescriptor& lattice, const FullyCriticalOptions& options) {
  const GramMatrix& q = lattice.gram;
  if (!q.is_integral()) throw DomainError("fully_critical needs an integral Gram matrix");
  FullyCriticalReport r{lattice};
  r.doubled = !is_even(q);
  const Rational scale = r.doubled ? Rational(2) : Rational(1);
  const GramMatrix working = r.doubled ? doubled(q) : q;
  r.augmented_with_A1 = q.dim() % 2 == 1 || options.force_A1_route;
  const GramMatrix modular = r.augmented_with_A1 ? orthosum_A1(working) : working;
  r.level = level(modular);
  r.weight = modular.dim() / 2 + 2;
  r.sturm_B = sturm_bound(r.weight, r.level);
  r.bound_from_override = options.override_bound.has_value();
  r.bound_B = options.override_bound.value_or(r.sturm_B);
  if (r.bound_B == 0) throw DomainError("certification bound must be positive");
  r.target_norm = Rational(static_cast<unsigned long>(2 * r.bound_B)) / scale;

  // Layers of the input lattice are tested directly: homothety preserves the
  // design property, and the input keeps the reported sums small.
  Rational bound = affordable_bound(q, r.target_norm, options.limits.max_vectors);
  std::optional<std::vector<LayerMoment>> layers;
  while (!layers) {
    if (sgn(bound) <= 0) break;
    try {
      layers = layer_moments(q, bound, options.limits);
    } catch (const BudgetExceeded&) {
      bound = Rational(static_cast<long>(std::floor(bound.get_d() * 0.7)));
    }
  }
  if (!layers) {
    r.verdict = Verdict::Inconclusive;
    r.certified_norm = 0;
    r.message = "enumeration budget exhausted before the first layer";
    return r;
  }
  for (const auto& l : *layers) r.vectors_enumerated += l.count;

  for (const auto& layer : *layers) {
    DesignVerdict v = is_2_design(layer, q);
    const bool ok = v.is_design;
    r.per_layer.push_back(std::move(v));
    if (!ok) {
      r.verdict = Verdict::Failure;
      r.failure_norm = layer.norm;
      r.failure_working_norm = layer.norm * scale;
      r.certified_norm = layer.norm;
      r.message = "FAILURE at the layer (x,x)=" + to_string(layer.norm);
      return r;
    }
  }
  r.certified_norm = bound;
  if (bound < r.target_norm) {
    r.verdict = Verdict::Inconclusive;
    r.message = "enumeration budget allows layers up to (x,x)=" + to_string(bound) + " of the required " +
                to_string(r.target_norm);
  } else {
    r.verdict = Verdict::FullyCritical;
    r.message = "2-designs on every layer up to (x,x)=" + to_string(r.target_norm) + ", hence on every layer";
  }
  return r;
}

std::vector<Layer> first_layers(const GramMatrix& q, std::size_t count, const EnumerationLimits& limits) {
  Rational bound = q(0, 0);
  for (std::size_t i = 1; i < q.dim(); ++i) bound = std::max(bound, q(i, i));
  for (;;) {
    LayerSpectrum s = enumerate_layers(q, bound, limits);
    if (s.layers.size() >= count) {
      s.layers.resize(count);
      return std::move(s.layers);
    }
    bound *= 2;
  }
}

ConjectureProbe conjecture_probe(const LatticeDescriptor& lattice, const FullyCriticalOptions& options) {
  ConjectureProbe p;
  const std::vector<Layer> layers = first_layers(lattice.gram, 2, options.limits);
  p.first_two_designs = true;
  for (const auto& l : layers) p.first_two_designs = p.first_two_designs && is_t_design(l, lattice.gram, 2).is_design;
  if (!p.first_two_designs) return p;
  const FullyCriticalReport r = fully_critical(lattice, options);
  p.verdict = r.verdict;
  p.fully_critical = r.verdict == Verdict::FullyCritical;
  return p;
}

}  // namespace latdesign
