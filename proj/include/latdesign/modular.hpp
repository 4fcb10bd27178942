#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latdesign/design.hpp"
#include "latdesign/gram.hpp"
#include "latdesign/layers.hpp"

namespace latdesign {

/// [SL2(Z) : Gamma1(N)]: N^2 prod_{p | N} (1 - 1/p^2) for N >= 3, with the
/// small cases 1 -> 1 and 2 -> 3.
std::uint64_t gamma1_index(std::uint64_t level);

/// ceil(k * [SL2(Z) : Gamma1(N)] / 12).  A form in M_k(Gamma1(N)) whose
/// q-expansion vanishes through this exponent is zero.
std::uint64_t sturm_bound(std::uint64_t weight, std::uint64_t level);

enum class Verdict { FullyCritical, Failure, Inconclusive };

std::string to_string(Verdict v);

/// Result of certifying that every layer of a lattice is a 2-design.
///
/// The even working lattice is sqrt(scale) * Lambda with scale 1 or 2; for odd
/// dimension the modular data (level, weight) come from its orthogonal sum
/// with A1.  Per-layer verdicts are reported on the input lattice, whose
/// layers up to norm 2 * bound_B / scale are tested.
struct FullyCriticalReport {
  explicit FullyCriticalReport(LatticeDescriptor in) : input(std::move(in)) {}

  LatticeDescriptor input;
  bool doubled = false;
  bool augmented_with_A1 = false;
  std::uint64_t level = 0;
  std::uint64_t weight = 0;
  std::uint64_t bound_B = 0;
  std::uint64_t sturm_B = 0;
  bool bound_from_override = false;
  std::vector<DesignVerdict> per_layer;
  Verdict verdict = Verdict::Inconclusive;
  /// First failing norm of the input lattice (and of the working lattice).
  std::optional<Rational> failure_norm;
  std::optional<Rational> failure_working_norm;
  /// Largest input-lattice norm through which every layer was tested.
  Rational certified_norm;
  /// Input-lattice norm the verdict needs to reach.
  Rational target_norm;
  std::size_t vectors_enumerated = 0;
  std::string message;

  /// 1 for definitive failure, 2 for inconclusive, 0 otherwise.
  int exit_code() const;
};

/// Layers are streamed (no vectors kept), so the budget is only a time limit.
inline constexpr std::size_t kStreamingBudget = 250'000'000;

struct FullyCriticalOptions {
  std::optional<std::uint64_t> override_bound;
  EnumerationLimits limits{kStreamingBudget};
  /// Take the odd-dimension route (orthogonal sum with A1) even when n is even.
  bool force_A1_route = false;
};

FullyCriticalReport fully_critical(const LatticeDescriptor& lattice, const FullyCriticalOptions& options = {});

struct ConjectureProbe {
  bool first_two_designs = false;
  bool fully_critical = false;
  /// Verdict of the full certification; only run when the first two layers
  /// are designs.
  std::optional<Verdict> verdict;

  /// (first two layers are designs) and (some later layer is not).
  bool counterexample() const { return first_two_designs && verdict == Verdict::Failure; }
};

ConjectureProbe conjecture_probe(const LatticeDescriptor& lattice, const FullyCriticalOptions& options = {});

/// The first `count` nonempty layers, growing the enumeration bound as needed.
std::vector<Layer> first_layers(const GramMatrix& q, std::size_t count, const EnumerationLimits& limits = {});

}  // namespace latdesign
