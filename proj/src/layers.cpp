#include "latdesign/layers.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <ostream>

#include "latdesign/errors.hpp"

namespace latdesign {

const Layer* LayerSpectrum::find(const Rational& norm) const {
  auto it = std::lower_bound(layers.begin(), layers.end(), norm,
                             [](const Layer& l, const Rational& v) { return l.norm < v; });
  if (it == layers.end() || it->norm != norm) return nullptr;
  return &*it;
}

std::size_t LayerSpectrum::total_vectors() const {
  std::size_t total = 0;
  for (const auto& l : layers) total += l.cardinality();
  return total;
}

// --- LLL ----------------------------------------------------------------

namespace {

Integer round_nearest(const Rational& x) {
  // floor(x + 1/2)
  Rational y = x + Rational(1, 2);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return q;
}

struct GramSchmidt {
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> r;  // squared norms of the orthogonalized vectors
};

GramSchmidt orthogonalize(const RationalMatrix& g) {
  const std::size_t n = g.dim();
  GramSchmidt gs{std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)), std::vector<Rational>(n)};
  std::vector<std::vector<Rational>> rr(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Rational v = g(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= gs.mu[j][k] * rr[i][k];
      rr[i][j] = v;
      if (j < i) gs.mu[i][j] = v / gs.r[j];
    }
    gs.r[i] = rr[i][i];
  }
  return gs;
}

}  // namespace

std::vector<IntVec> lll_reduce(const GramMatrix& q, const Rational& delta) {
  const std::size_t n = q.dim();
  // basis[j] holds the coordinates of the j-th basis vector.
  std::vector<std::vector<Integer>> basis(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) basis[i][i] = 1;
  RationalMatrix g = q.matrix();

  auto gram_of = [&]() {
    RationalMatrix out(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        Rational acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (basis[a][i] == 0) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (basis[b][j] == 0) continue;
            acc += q(i, j) * basis[a][i] * basis[b][j];
          }
        }
        out(a, b) = acc;
        out(b, a) = acc;
      }
    return out;
  };

  std::size_t k = 1;
  GramSchmidt gs = orthogonalize(g);
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      Integer c = round_nearest(gs.mu[k][jj]);
      if (c == 0) continue;
      for (std::size_t i = 0; i < n; ++i) basis[k][i] -= c * basis[jj][i];
      g = gram_of();
      gs = orthogonalize(g);
    }
    const Rational& m = gs.mu[k][k - 1];
    if (gs.r[k] >= (delta - m * m) * gs.r[k - 1]) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      g = gram_of();
      gs = orthogonalize(g);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }

  std::vector<IntVec> u(n, IntVec(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      if (!basis[j][i].fits_slong_p()) throw DomainError("LLL transform entry overflows 64 bits");
      u[i][j] = basis[j][i].get_si();
    }
  return u;
}

// --- Fincke-Pohst -----------------------------------------------------------

namespace {

class ShortVectorSearch {
 public:
  ShortVectorSearch(const Eigen::MatrixXd& g, double bound,
                    const std::function<void(std::span<const std::int64_t>, double)>& visit,
                    const EnumerationLimits& limits)
      : n_(static_cast<std::size_t>(g.rows())), bound_(bound), visit_(visit), limits_(limits),
        qd_(n_), qo_(n_, std::vector<double>(n_)), y_(n_, 0), neg_(n_, 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw InvalidGram("form is not positive definite in floating point");
    const Eigen::MatrixXd r = llt.matrixU();
    for (std::size_t i = 0; i < n_; ++i) {
      qd_[i] = r(i, i) * r(i, i);
      for (std::size_t j = i + 1; j < n_; ++j) qo_[i][j] = r(i, j) / r(i, i);
    }
    g_ = g;
  }

  void run() {
    if (n_ == 0 || bound_ <= 0) return;
    descend(n_ - 1, bound_, true);
  }

 private:
  void descend(std::size_t i, double rem, bool higher_zero) {
    double center = 0;
    for (std::size_t j = i + 1; j < n_; ++j) center -= qo_[i][j] * static_cast<double>(y_[j]);
    const double radius = std::sqrt(std::max(rem, 0.0) / qd_[i]);
    auto lo = static_cast<std::int64_t>(std::ceil(center - radius));
    auto hi = static_cast<std::int64_t>(std::floor(center + radius));
    if (higher_zero) lo = std::max<std::int64_t>(lo, 0);
    for (std::int64_t v = lo; v <= hi; ++v) {
      const double d = static_cast<double>(v) - center;
      const double used = qd_[i] * d * d;
      if (used > rem) continue;
      y_[i] = v;
      const bool still_zero = higher_zero && v == 0;
      if (i == 0) {
        if (still_zero) continue;
        emit();
      } else {
        descend(i - 1, rem - used, still_zero);
      }
    }
    y_[i] = 0;
  }

  void emit() {
    const Eigen::Map<const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>> yv(y_.data(), static_cast<Eigen::Index>(n_));
    const Eigen::VectorXd yd = yv.cast<double>();
    const double norm = yd.dot(g_ * yd);
    seen_ += 2;
    if (seen_ > limits_.max_vectors) {
      throw BudgetExceeded("enumeration exceeded the budget of " + std::to_string(limits_.max_vectors) +
                               " vectors",
                           seen_ - 2);
    }
    visit_(y_, norm);
    for (std::size_t k = 0; k < n_; ++k) neg_[k] = -y_[k];
    visit_(neg_, norm);
  }

  std::size_t n_;
  double bound_;
  const std::function<void(std::span<const std::int64_t>, double)>& visit_;
  EnumerationLimits limits_;
  Eigen::MatrixXd g_;
  std::vector<double> qd_;
  std::vector<std::vector<double>> qo_;
  std::vector<std::int64_t> y_;
  std::vector<std::int64_t> neg_;
  std::size_t seen_ = 0;
};

}  // namespace

void for_each_short_vector(const Eigen::MatrixXd& g, double bound,
                           const std::function<void(std::span<const std::int64_t>, double)>& visit,
                           const EnumerationLimits& limits) {
  ShortVectorSearch search(g, bound, visit, limits);
  search.run();
}

void for_each_vector(const GramMatrix& q, const Rational& bound,
                     const std::function<void(std::span<const std::int64_t>, const Integer&)>& visit,
                     const EnumerationLimits& limits) {
  if (sgn(bound) <= 0) return;
  const std::size_t n = q.dim();
  const std::vector<IntVec> u = lll_reduce(q);
  RationalMatrix um(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) um(i, j) = Rational(static_cast<long>(u[i][j]));
  const GramMatrix reduced(um.transpose() * q.matrix() * um);

  const Rational scaled_bound = bound * q.denominator();
  const double float_bound = bound.get_d() * (1.0 + 1e-9) + 1e-12;
  IntVec x(n);
  Integer norm;
  const auto& small = q.scaled_small();
  const bool fast = small && scaled_bound.get_num().fits_slong_p();
  const __int128 fast_bound = fast ? scaled_bound.get_num().get_si() / scaled_bound.get_den().get_si() : 0;
  for_each_short_vector(
      reduced.to_eigen(), float_bound,
      [&](std::span<const std::int64_t> y, double) {
        for (std::size_t i = 0; i < n; ++i) {
          std::int64_t acc = 0;
          for (std::size_t j = 0; j < n; ++j) acc += u[i][j] * y[j];
          x[i] = acc;
        }
        if (fast) {
          // Norms are integers here, so comparing with floor(bound) is exact.
          const auto& a = *small;
          __int128 acc = 0;
          for (std::size_t i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            __int128 row = 0;
            for (std::size_t j = 0; j < n; ++j) row += static_cast<__int128>(a[i * n + j]) * x[j];
            acc += row * x[i];
          }
          if (acc > fast_bound) return;
          if (acc <= LONG_MAX) {
            norm = static_cast<long>(acc);
          } else {
            norm = from_int128(acc);
          }
          visit(x, norm);
          return;
        }
        norm = q.evaluate_scaled(x);
        if (norm <= scaled_bound) visit(x, norm);
      },
      limits);
}

LayerSpectrum enumerate_layers(const GramMatrix& q, const Rational& bound, const EnumerationLimits& limits) {
  if (sgn(bound) <= 0) throw DomainError("enumeration bound must be positive");
  std::map<Integer, std::vector<IntVec>> groups;
  for_each_vector(
      q, bound,
      [&](std::span<const std::int64_t> x, const Integer& norm) { groups[norm].emplace_back(x.begin(), x.end()); },
      limits);
  LayerSpectrum s{q, bound, {}};
  s.layers.reserve(groups.size());
  for (auto& [norm, vecs] : groups) {
    std::sort(vecs.begin(), vecs.end());
    Rational m(norm, q.denominator());
    m.canonicalize();
    s.layers.push_back(Layer{std::move(m), std::move(vecs)});
  }
  return s;
}

std::vector<LayerMoment> layer_moments(const GramMatrix& q, const Rational& bound, const EnumerationLimits& limits) {
  if (sgn(bound) <= 0) throw DomainError("enumeration bound must be positive");
  const std::size_t n = q.dim();
  struct Acc {
    std::size_t count = 0;
    std::vector<__int128> m;
  };
  std::map<Integer, Acc> groups;
  for_each_vector(
      q, bound,
      [&](std::span<const std::int64_t> x, const Integer& norm) {
        Acc& a = groups[norm];
        if (a.m.empty()) a.m.assign(n * n, 0);
        ++a.count;
        for (std::size_t i = 0; i < n; ++i) {
          if (x[i] == 0) continue;
          for (std::size_t j = i; j < n; ++j) a.m[i * n + j] += static_cast<__int128>(x[i]) * x[j];
        }
      },
      limits);
  std::vector<LayerMoment> out;
  out.reserve(groups.size());
  for (auto& [norm, a] : groups) {
    LayerMoment l{Rational(norm, q.denominator()), a.count, RationalMatrix(n)};
    l.norm.canonicalize();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) l.moment(i, j) = l.moment(j, i) = Rational(from_int128(a.m[i * n + j]));
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<std::pair<Rational, std::size_t>> layer_cardinalities(const LayerSpectrum& s) {
  std::vector<std::pair<Rational, std::size_t>> out;
  out.reserve(s.layers.size());
  for (const auto& l : s.layers) out.emplace_back(l.norm, l.cardinality());
  return out;
}

std::vector<IntVec> half_layer(const Layer& layer) {
  std::vector<IntVec> out;
  out.reserve(layer.cardinality() / 2);
  for (const auto& v : layer.vectors) {
    auto it = std::find_if(v.begin(), v.end(), [](std::int64_t c) { return c != 0; });
    if (it != v.end() && *it > 0) out.push_back(v);
  }
  return out;
}

double estimate_vector_count(const GramMatrix& q, const Rational& bound) {
  const double n = static_cast<double>(q.dim());
  const double det = determinant(q).get_d();
  const double log_ball = 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0) + 0.5 * n * std::log(bound.get_d());
  return std::exp(log_ball - 0.5 * std::log(det));
}

void write_layer_dump(std::ostream& out, const LayerSpectrum& s) {
  for (const auto& l : s.layers) {
    out << to_string(l.norm) << ' ' << l.cardinality() << '\n';
    for (const auto& v : l.vectors) {
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
      out << '\n';
    }
  }
}

}  // namespace latdesign
