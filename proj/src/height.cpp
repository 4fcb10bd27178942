#include "latdesign/height.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "latdesign/errors.hpp"

namespace latdesign {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kEps = 1e-16;

// Gamma(a, x) by the modified Lentz continued fraction; good for x >~ 1.
double gamma_upper_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x)) * h;
}

// Lower gamma(a, x) by its power series, a > 0.
double gamma_lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x));
}

// E1(x) = Gamma(0, x) for small x.
double expint_e1_series(double x) {
  double sum = 0;
  double term = 1;
  for (int k = 1; k < 1000; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::abs(add) < std::abs(sum) * kEps) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

double reciprocal_gamma(double s) {
  if (s <= 0 && s == std::floor(s)) return 0.0;
  return 1.0 / std::tgamma(s);
}

// x^{-a} Gamma(a, x) = int_1^inf e^{-x t} t^{a-1} dt, decreasing in x.
double incomplete_integral(double a, double x) { return std::exp(-a * std::log(x)) * incomplete_gamma_upper(a, x); }

struct Shell {
  double norm = 0;
  std::size_t count = 0;
  Eigen::MatrixXd moment;  // sum of m m^t, only when requested
};

std::vector<Shell> collect_shells(const Eigen::MatrixXd& g, double bound, bool with_moments,
                                  const EnumerationLimits& limits) {
  const auto n = g.rows();
  std::vector<std::pair<double, Eigen::VectorXd>> pts;
  for_each_short_vector(
      g, bound,
      [&](std::span<const std::int64_t> y, double norm) {
        if (norm > bound) return;
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = static_cast<double>(y[static_cast<std::size_t>(i)]);
        pts.emplace_back(norm, with_moments ? v : Eigen::VectorXd());
      },
      limits);
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Shell> shells;
  for (const auto& [norm, v] : pts) {
    if (shells.empty() || norm - shells.back().norm > 1e-10 * std::max(1.0, norm)) {
      Shell s;
      s.norm = norm;
      if (with_moments) s.moment = Eigen::MatrixXd::Zero(n, n);
      shells.push_back(std::move(s));
    }
    Shell& s = shells.back();
    ++s.count;
    if (with_moments) s.moment.noalias() += v * v.transpose();
  }
  return shells;
}

// #{m != 0 : G[m] <= r} <= prod_i (2 floor(sqrt(r (G^{-1})_ii)) + 1) - 1.
double box_count(const Eigen::VectorXd& inv_diag, double r) {
  double c = 1;
  for (Eigen::Index i = 0; i < inv_diag.size(); ++i) c *= 2.0 * std::floor(std::sqrt(r * inv_diag(i))) + 1.0;
  return c - 1.0;
}

// Bound on sum over m with pi G[m] > radius of term(pi G[m]), term decreasing.
double tail_bound(const Eigen::VectorXd& inv_diag, double radius, const std::function<double(double)>& term) {
  const double r0 = radius / kPi;
  const double step = std::max(0.05, r0 / 64.0);
  double total = 0;
  for (int k = 0; k < 200000; ++k) {
    const double lo = r0 + k * step;
    const double add = box_count(inv_diag, lo + step) * term(kPi * lo);
    total += add;
    if (k > 8 && add <= 1e-18 * total) break;
    if (add == 0 && k > 8) break;
  }
  return total;
}

// One side of a two-sided lattice sum: shells of a form and the per-vector term.
struct Side {
  Eigen::MatrixXd form;
  std::function<double(double)> term;  // of x = pi * norm
  double weight = 1.0;
  bool with_moments = false;
  std::vector<Shell> shells;
  double partial = 0;
  double tail = 0;
};

// Picks the radius, enumerates every side and evaluates partial sums and tails.
double evaluate_sides(std::vector<Side>& sides, const SumOptions& opt) {
  double radius = opt.radius;
  auto enumerate = [&](double r) {
    for (auto& s : sides) {
      s.shells = collect_shells(s.form, r / kPi, s.with_moments, opt.limits);
      s.partial = 0;
      // Large norms first keeps the small terms from being absorbed.
      for (auto it = s.shells.rbegin(); it != s.shells.rend(); ++it) {
        s.partial += s.weight * static_cast<double>(it->count) * s.term(kPi * it->norm);
      }
    }
  };
  auto tails = [&](double r) {
    double total = 0;
    for (auto& s : sides) {
      const Eigen::VectorXd inv_diag = s.form.inverse().diagonal();
      s.tail = s.weight * tail_bound(inv_diag, r, s.term);
      total += s.tail;
    }
    return total;
  };
  enumerate(radius);
  if (opt.auto_expand) {
    double partial = 0;
    for (const auto& s : sides) partial += std::abs(s.partial);
    const double start = radius;
    while (tails(radius) > opt.tail_tolerance * partial && radius < opt.max_radius) radius += 4.0;
    if (radius != start) enumerate(radius);
  }
  tails(radius);
  return radius;
}

void check_form(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols() || q.rows() == 0) throw DomainError("form must be a nonempty square matrix");
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) throw DomainError("form is not positive definite");
}

}  // namespace

double incomplete_gamma_upper(double a, double x) {
  if (!(x > 0)) throw DomainError("incomplete_gamma_upper needs x > 0");
  if (a > 0) {
    if (x < a + 1.0) return std::tgamma(a) - gamma_lower_series(a, x);
    return gamma_upper_cf(a, x);
  }
  if (x >= 1.0) return gamma_upper_cf(a, x);
  if (a == 0) return expint_e1_series(x);
  // Gamma(a, x) = (Gamma(a + 1, x) - x^a e^{-x}) / a.
  return (incomplete_gamma_upper(a + 1.0, x) - std::exp(a * std::log(x) - x)) / a;
}

TruncatedSum completed_epstein_zeta(const Eigen::MatrixXd& q, double s, const SumOptions& options) {
  check_form(q);
  const double n = static_cast<double>(q.rows());
  if (std::abs(s - n / 2) < 1e-13) throw PoleError("Epstein zeta has a simple pole at s = n/2");
  if (s == 0) throw DomainError("s = 0 is handled by the height path, not epstein_zeta");
  const double inv_sqrt_det = 1.0 / std::sqrt(q.determinant());
  std::vector<Side> sides(2);
  sides[0].form = q;
  sides[0].term = [s](double x) { return incomplete_integral(s, x); };
  sides[1].form = q.inverse();
  sides[1].term = [a = n / 2 - s](double x) { return incomplete_integral(a, x); };
  sides[1].weight = inv_sqrt_det;
  const double radius = evaluate_sides(sides, options);
  TruncatedSum out;
  out.radius = radius;
  out.value = inv_sqrt_det / (s - n / 2) - 1.0 / s + sides[0].partial + sides[1].partial;
  out.tail = sides[0].tail + sides[1].tail;
  return out;
}

TruncatedSum epstein_zeta(const Eigen::MatrixXd& q, double s, const SumOptions& options) {
  TruncatedSum c = completed_epstein_zeta(q, s, options);
  const double factor = std::pow(kPi, s) * reciprocal_gamma(s);
  return {factor * c.value, c.radius, std::abs(factor) * c.tail};
}

TruncatedSum epstein_zeta(const GramMatrix& q, double s, const SumOptions& options) {
  return epstein_zeta(q.to_eigen(), s, options);
}

TruncatedSum f_value(const Eigen::MatrixXd& q, const SumOptions& options) {
  check_form(q);
  const double half_n = 0.5 * static_cast<double>(q.rows());
  std::vector<Side> sides(2);
  sides[0].form = q.inverse();
  sides[0].term = [](double x) { return incomplete_gamma_upper(0.0, x); };
  sides[1].form = q;
  sides[1].term = [half_n](double x) { return incomplete_integral(half_n, x); };
  sides[1].weight = std::sqrt(q.determinant());
  const double radius = evaluate_sides(sides, options);
  return {sides[0].partial + sides[1].partial, radius, sides[0].tail + sides[1].tail};
}

double height_constant(std::size_t n) {
  return -2.0 / static_cast<double>(n) - kEulerGamma - std::log(kPi);
}

Eigen::MatrixXd grad_f(const Eigen::MatrixXd& q0, const SumOptions& options) {
  check_form(q0);
  const double half_n = 0.5 * static_cast<double>(q0.rows());
  const Eigen::MatrixXd qi = q0.inverse();
  std::vector<Side> sides(2);
  // alpha(m_k) = pi int_1^inf e^{-pi m_k t} t^{n/2} dt
  sides[0].form = q0;
  sides[0].term = [half_n](double x) { return kPi * incomplete_integral(half_n + 1.0, x); };
  sides[0].with_moments = true;
  // beta(m_j) = e^{-pi m_j} / m_j
  sides[1].form = qi;
  sides[1].term = [](double x) { return kPi * std::exp(-x) / x; };
  sides[1].with_moments = true;
  evaluate_sides(sides, options);

  const auto n = q0.rows();
  Eigen::MatrixXd primal = Eigen::MatrixXd::Zero(n, n);
  for (auto it = sides[0].shells.rbegin(); it != sides[0].shells.rend(); ++it) {
    primal += sides[0].term(kPi * it->norm) * it->moment;
  }
  Eigen::MatrixXd dual = Eigen::MatrixXd::Zero(n, n);
  for (auto it = sides[1].shells.rbegin(); it != sides[1].shells.rend(); ++it) {
    dual += sides[1].term(kPi * it->norm) * it->moment;
  }
  Eigen::MatrixXd g = -primal + qi * dual * qi;
  return 0.5 * (g + g.transpose());
}

double stationarity_residual(const Eigen::MatrixXd& q0, const SumOptions& options) {
  const Eigen::MatrixXd g = grad_f(q0, options);
  const TangentDirection t = tangent_project(q0, g);
  return t.h.norm() / std::max(g.norm(), 1e-300);
}

double stationarity_residual(const GramMatrix& q, const SumOptions& options) {
  return stationarity_residual(normalize_det1(q), options);
}

double directional_derivative_fd(const TangentDirection& h, double step, const SumOptions& options) {
  if (step == 0) throw DomainError("finite-difference step must be nonzero");
  SumOptions fixed = options;
  fixed.radius = f_value(h.base, options).radius;
  fixed.auto_expand = false;
  const double plus = f_value(exp_map(h, step), fixed).value;
  const double minus = f_value(exp_map(h, -step), fixed).value;
  return (plus - minus) / (2.0 * step);
}

HeightReport height_of_form(const Eigen::MatrixXd& q, const SumOptions& options) {
  HeightReport r;
  const TruncatedSum f = f_value(q, options);
  r.F_value = f.value;
  r.truncation_radius = f.radius;
  r.tail_estimate = f.tail;
  r.constant_C = height_constant(static_cast<std::size_t>(q.rows()));
  r.height = r.constant_C + r.F_value + 2.0 * std::log(2.0 * kPi);
  SumOptions fixed = options;
  fixed.radius = f.radius;
  fixed.auto_expand = false;
  r.gradient = grad_f(q, fixed);
  const TangentDirection t = tangent_project(q, r.gradient);
  r.projected_residual = t.h.norm() / std::max(r.gradient.norm(), 1e-300);
  return r;
}

HeightReport height(const GramMatrix& q, const SumOptions& options) {
  return height_of_form(normalize_det1(q), options);
}

HeightReport height(const LatticeDescriptor& lattice, const SumOptions& options) {
  return height(lattice.gram, options);
}

CurvatureProbe curvature_probe(const Eigen::MatrixXd& q0, int samples, std::uint64_t seed, double step,
                               const SumOptions& options) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto n = q0.rows();
  SumOptions fixed = options;
  const double f0 = f_value(q0, options).value;
  fixed.radius = f_value(q0, options).radius;
  fixed.auto_expand = false;
  CurvatureProbe p;
  p.min_second_difference = std::numeric_limits<double>::infinity();
  p.max_second_difference = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) s(i, j) = s(j, i) = normal(rng);
    TangentDirection h = tangent_project(q0, s);
    h.h /= h.h.norm();
    const double d2 = f_value(exp_map(h, step), fixed).value - 2 * f0 + f_value(exp_map(h, -step), fixed).value;
    if (d2 > 0) ++p.positive;
    if (d2 < 0) ++p.negative;
    p.min_second_difference = std::min(p.min_second_difference, d2);
    p.max_second_difference = std::max(p.max_second_difference, d2);
  }
  return p;
}

}  // namespace latdesign
