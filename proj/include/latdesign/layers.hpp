#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "latdesign/gram.hpp"
#include "latdesign/rational.hpp"

namespace latdesign {

/// M_k(Q): all integer vectors x with Q[x] = norm.
struct Layer {
  Rational norm;
  std::vector<IntVec> vectors;

  std::size_t cardinality() const noexcept { return vectors.size(); }
};

/// Layers of Q up to `bound`, sorted by strictly increasing norm; each
/// layer's vectors are in lexicographic order.
struct LayerSpectrum {
  GramMatrix gram;
  Rational bound;
  std::vector<Layer> layers;

  /// nullptr when no vector of Q has this norm (or it exceeds the bound).
  const Layer* find(const Rational& norm) const;
  std::size_t total_vectors() const;
};

/// Size and second moment sum x x^t of one layer, without its vectors.
struct LayerMoment {
  Rational norm;
  std::size_t count = 0;
  RationalMatrix moment;
};

struct EnumerationLimits {
  std::size_t max_vectors = 60'000'000;
};

/// Exact LLL reduction (delta = 0.99) of the form: returns U (rows of the
/// unimodular matrix) such that U^t Q U is LLL-reduced.
std::vector<IntVec> lll_reduce(const GramMatrix& q, const Rational& delta = Rational(99, 100));

/// Fincke-Pohst enumeration of every nonzero y with G[y] <= bound for a real
/// positive definite G.  Visits y and -y.  Throws BudgetExceeded once more
/// than `limits.max_vectors` vectors have been visited.
void for_each_short_vector(const Eigen::MatrixXd& g, double bound,
                           const std::function<void(std::span<const std::int64_t>, double)>& visit,
                           const EnumerationLimits& limits = {});

/// Streaming form of the exact enumeration: calls `visit(x, dQ[x])` for every
/// nonzero x with Q[x] <= bound, where d = q.denominator().  The search runs in
/// floating point on the LLL-reduced form with a relative margin of 1e-9 and
/// every candidate is re-checked exactly, so no vector is missed or invented.
void for_each_vector(const GramMatrix& q, const Rational& bound,
                     const std::function<void(std::span<const std::int64_t>, const Integer&)>& visit,
                     const EnumerationLimits& limits = {});

LayerSpectrum enumerate_layers(const GramMatrix& q, const Rational& bound,
                               const EnumerationLimits& limits = {});

/// Streaming counterpart of enumerate_layers: memory is O(layers * n^2).
std::vector<LayerMoment> layer_moments(const GramMatrix& q, const Rational& bound,
                                       const EnumerationLimits& limits = {});

std::vector<std::pair<Rational, std::size_t>> layer_cardinalities(const LayerSpectrum& s);

/// One representative of each antipodal pair: the vectors whose first
/// nonzero coordinate is positive.
std::vector<IntVec> half_layer(const Layer& layer);

/// Gaussian-heuristic estimate of #{x : Q[x] <= bound}.
double estimate_vector_count(const GramMatrix& q, const Rational& bound);

/// "m_k count" header lines each followed by the layer's vectors.
void write_layer_dump(std::ostream& out, const LayerSpectrum& s);

}  // namespace latdesign
