#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "latdesign/gram.hpp"
#include "latdesign/layers.hpp"

namespace latdesign {

/// Upper incomplete gamma function Gamma(a, x) for real a and x > 0, to about
/// 1e-14 relative accuracy.  Series below the transition point, Lentz continued
/// fraction above it, upward recurrence for negative a at small x.
double incomplete_gamma_upper(double a, double x);

/// Truncation control for the lattice sums.  A sum over Q[m] includes every m
/// with pi Q[m] <= radius; with auto_expand the radius grows until the
/// certified tail falls below tail_tolerance times the partial sum.
struct SumOptions {
  double radius = 40.0;
  bool auto_expand = true;
  double tail_tolerance = 1e-13;
  double max_radius = 160.0;
  EnumerationLimits limits{};
};

/// A lattice sum together with the radius used and a rigorous bound on the
/// omitted terms (roundoff aside).
struct TruncatedSum {
  double value = 0;
  double radius = 0;
  double tail = 0;
};

/// Epstein zeta Z(Q, s) through its incomplete-gamma continuation
///   pi^{-s} Gamma(s) Z(Q,s) = |Q|^{-1/2}/(s - n/2) - 1/s
///       + sum_m (pi Q[m])^{-s} Gamma(s, pi Q[m])
///       + |Q|^{-1/2} sum_m (pi Q^{-1}[m])^{s-n/2} Gamma(n/2 - s, pi Q^{-1}[m]).
/// Throws PoleError at s = n/2 and DomainError at s = 0.
TruncatedSum epstein_zeta(const Eigen::MatrixXd& q, double s, const SumOptions& options = {});
TruncatedSum epstein_zeta(const GramMatrix& q, double s, const SumOptions& options = {});

/// The bracketed right-hand side of the continuation above (the completed
/// zeta function pi^{-s} Gamma(s) Z(Q, s)), defined for s != 0, n/2.
TruncatedSum completed_epstein_zeta(const Eigen::MatrixXd& q, double s, const SumOptions& options = {});

/// F_Q(0) = sum_m Gamma(0, pi Q^{-1}[m]) + |Q|^{1/2} sum_m (pi Q[m])^{-n/2} Gamma(n/2, pi Q[m]).
/// With this, Z'(Q^{-1}, 0) = C + F_Q(0) on determinant-1 forms.
TruncatedSum f_value(const Eigen::MatrixXd& q, const SumOptions& options = {});

/// C = -2/n - gamma - log(pi): the s-derivative at 0 of
/// (pi^s / Gamma(s)) (1/(s - n/2) - 1/s).
double height_constant(std::size_t n);

/// Gradient of F(., 0) at a determinant-1 form Q0, as the symmetric matrix
///   - sum_k alpha_k sum_{M_k(Q0)} m m^t + sum_j beta_j Q0^{-1} (sum_{M_j(Q0^{-1})} m m^t) Q0^{-1}
/// with alpha_k = pi (pi m_k)^{-(n/2+1)} Gamma(n/2 + 1, pi m_k) and
/// beta_j = exp(-pi m_j) / m_j.
Eigen::MatrixXd grad_f(const Eigen::MatrixXd& q0, const SumOptions& options = {});

/// |tangent part of grad F|_F / max(|grad F|_F, eps).
double stationarity_residual(const Eigen::MatrixXd& q0, const SumOptions& options = {});
double stationarity_residual(const GramMatrix& q, const SumOptions& options = {});

/// (F(e(+step)) - F(e(-step))) / (2 step) along the geodesic t -> exp_map(h, t).
/// Both evaluations share one fixed truncation radius.
double directional_derivative_fd(const TangentDirection& h, double step, const SumOptions& options = {});

struct HeightReport {
  double height = 0;
  double F_value = 0;
  double constant_C = 0;
  Eigen::MatrixXd gradient;
  double projected_residual = 0;
  double truncation_radius = 0;
  double tail_estimate = 0;
};

/// h(Lambda) = C + F_Q(0) + 2 log(2 pi) for Q normalized to determinant 1.
HeightReport height(const GramMatrix& q, const SumOptions& options = {});
HeightReport height(const LatticeDescriptor& lattice, const SumOptions& options = {});
HeightReport height_of_form(const Eigen::MatrixXd& q_det1, const SumOptions& options = {});

/// Heuristic only: second differences of F along `samples` random tangent
/// geodesics at Q0.  Says nothing rigorous about minima or saddles.
struct CurvatureProbe {
  int positive = 0;
  int negative = 0;
  double min_second_difference = 0;
  double max_second_difference = 0;
};
CurvatureProbe curvature_probe(const Eigen::MatrixXd& q0, int samples, std::uint64_t seed, double step = 1e-3,
                               const SumOptions& options = {});

}  // namespace latdesign
