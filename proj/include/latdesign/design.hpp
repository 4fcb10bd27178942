#pragma once

#include <cstddef>
#include <vector>

#include "latdesign/gram.hpp"
#include "latdesign/layers.hpp"
#include "latdesign/rational.hpp"

namespace latdesign {

/// Outcome of the pair-power-sum test on one layer.
///
/// lhs = sum over x, y in the layer of (x . y)^t and
/// rhs = (1*3*...*(t-1)) / (n(n+2)...(n+t-2)) * m^t * |X|^2.
/// For antipodal sets lhs >= rhs, with equality exactly for t-designs.
struct DesignVerdict {
  Rational norm;
  int t = 2;
  Rational lhs;
  Rational rhs;
  bool is_design = false;

  /// The same two sides over one representative of each pair {x, -x}
  /// (a quarter of lhs and rhs); the convention of tabulated transcripts.
  Rational half_lhs() const { return lhs / 4; }
  Rational half_rhs() const { return rhs / 4; }
};

/// Degree-2 homogeneous polynomial x -> x^t P x, P symmetric.
struct HarmonicPoly {
  RationalMatrix coeff;

  Rational evaluate(std::span<const std::int64_t> x) const;
};

/// c_t = (1*3*...*(t-1)) / (n(n+2)...(n+t-2)) * size.  Throws DomainError for
/// odd or non-positive t and n < 1.
Rational design_constant(int n, int t, std::size_t size);

/// Exact sum of (x^t Q y)^t over all ordered pairs of the layer, computed over
/// half-layer pairs (the antipodal copies contribute a factor 4).
Rational pair_power_sum(const Layer& layer, const GramMatrix& q, int t);

DesignVerdict is_t_design(const Layer& layer, const GramMatrix& q, int t);

/// c_t * m^t * |X|, the value the pair power sum takes exactly on t-designs.
Rational design_rhs(int n, int t, const Rational& norm, std::size_t size);

/// The t = 2 pair power sum from the second moment M = sum x x^t alone:
/// sum_{x,y} (x^t Q y)^2 = Tr((QM)^2).
Rational pair_power_sum_2(const RationalMatrix& moment, const GramMatrix& q);

/// is_t_design(., 2) on a streamed layer.
DesignVerdict is_2_design(const LayerMoment& layer, const GramMatrix& q);

/// Sum of x x^t over the layer, in coordinates.
RationalMatrix moment_matrix(const Layer& layer, std::size_t n);

/// n * sum x x^t == m |X| Q^{-1}.
bool is_2_design_moment(const Layer& layer, const GramMatrix& q);

/// Sum over the layer of x^t P x.
Rational harmonic_moment(const Layer& layer, const HarmonicPoly& p);

/// Traceless basis of degree-2 harmonics for the standard Laplacian:
/// E_ij + E_ji for i < j, then E_ii - E_{i+1,i+1}.
std::vector<HarmonicPoly> harm2_basis(std::size_t n);

/// Degree-2 harmonics for the Laplacian of the form Q, in coordinates:
/// symmetric P with Tr(Q^{-1} P) = 0 (these are A^t P' A for ambient
/// traceless P' and any factor Q = A^t A).  Dimension n(n+1)/2 - 1.
std::vector<HarmonicPoly> harm2_basis(const GramMatrix& q);

/// Tr(Q^{-1} P) == 0.
bool is_harmonic_for(const HarmonicPoly& p, const GramMatrix& q);

}  // namespace latdesign
