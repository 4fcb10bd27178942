#include "latdesign/gram.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "latdesign/errors.hpp"

namespace latdesign {

using json = nlohmann::json;

namespace {

// Entries of d*Q above this magnitude fall back to mpz evaluation; the bound
// keeps x^t (dQ) x inside __int128 for coordinates up to 2^40.
constexpr std::int64_t kSmallEntryLimit = std::int64_t{1} << 30;

void check_positive_definite(const RationalMatrix& m) {
  const std::size_t n = m.dim();
  RationalMatrix a = m;
  for (std::size_t k = 0; k < n; ++k) {
    // a(k,k) after elimination is minor_k / minor_{k-1}.
    if (sgn(a(k, k)) <= 0) {
      throw InvalidGram("matrix is not positive definite (leading minor " + std::to_string(k + 1) +
                        " is not positive)");
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
}

}  // namespace

GramMatrix::GramMatrix(RationalMatrix entries) : q_(std::move(entries)) {
  if (q_.dim() == 0) throw InvalidGram("Gram matrix must have dimension >= 1");
  if (!q_.is_symmetric()) throw InvalidGram("Gram matrix is not symmetric");
  check_positive_definite(q_);

  den_ = 1;
  for (const auto& x : q_.data()) den_ = lcm(den_, x.get_den());
  scaled_.reserve(q_.data().size());
  bool fits = true;
  for (const auto& x : q_.data()) {
    Integer s = x.get_num() * (den_ / x.get_den());
    if (abs(s) >= kSmallEntryLimit) fits = false;
    scaled_.push_back(std::move(s));
  }
  if (fits) {
    std::vector<std::int64_t> small;
    small.reserve(scaled_.size());
    for (const auto& s : scaled_) small.push_back(s.get_si());
    small_ = std::move(small);
  }
}

GramMatrix GramMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  const std::size_t n = rows.size();
  std::vector<Rational> data;
  data.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw InvalidGram("Gram matrix rows must all have length n");
    data.insert(data.end(), r.begin(), r.end());
  }
  return GramMatrix(RationalMatrix(n, std::move(data)));
}

GramMatrix GramMatrix::identity(std::size_t n) { return GramMatrix(RationalMatrix::identity(n)); }

GramMatrix GramMatrix::diagonal(const std::vector<Rational>& diag) {
  RationalMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return GramMatrix(std::move(m));
}

Rational GramMatrix::evaluate(std::span<const std::int64_t> x) const {
  Rational r(evaluate_scaled(x), den_);
  r.canonicalize();
  return r;
}

Integer GramMatrix::evaluate_scaled(std::span<const std::int64_t> x) const {
  const std::size_t n = dim();
  if (small_) {
    const auto& a = *small_;
    __int128 acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      __int128 row = 0;
      for (std::size_t j = 0; j < n; ++j) row += static_cast<__int128>(a[i * n + j]) * x[j];
      acc += row * x[i];
    }
    return from_int128(acc);
  }
  Integer acc = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      acc += scaled_[i * n + j] * Integer(static_cast<long>(x[i])) * Integer(static_cast<long>(x[j]));
  return acc;
}

Rational GramMatrix::inner(std::span<const std::int64_t> x, std::span<const std::int64_t> y) const {
  const std::size_t n = dim();
  Integer acc = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      acc += scaled_[i * n + j] * Integer(static_cast<long>(x[i])) * Integer(static_cast<long>(y[j]));
  Rational r(acc, den_);
  r.canonicalize();
  return r;
}

Eigen::MatrixXd GramMatrix::to_eigen() const {
  const std::size_t n = dim();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = q_(i, j).get_d();
  return m;
}

RationalMatrix inverse(const RationalMatrix& m) {
  const std::size_t n = m.dim();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw DomainError("matrix is singular");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    }
    Rational piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

GramMatrix gram_inverse(const GramMatrix& q) { return GramMatrix(inverse(q.matrix())); }

Rational determinant(const RationalMatrix& m) {
  const std::size_t n = m.dim();
  RationalMatrix a = m;
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

Rational determinant(const GramMatrix& q) { return determinant(q.matrix()); }

bool is_even(const GramMatrix& q) {
  if (!q.is_integral()) return false;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    if (q(i, i).get_num() % 2 != 0) return false;
  }
  return true;
}

std::uint64_t level(const GramMatrix& q) {
  if (!is_even(q)) throw ParityError("level() requires an even integral Gram matrix");
  const RationalMatrix inv = inverse(q.matrix());
  Integer l = 1;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    for (std::size_t j = 0; j < q.dim(); ++j) {
      const Rational& x = inv(i, j);
      Integer need = x.get_den();
      if (i == j && x.get_num() % 2 != 0) need *= 2;
      l = lcm(l, need);
    }
  }
  if (!l.fits_ulong_p()) throw DomainError("level does not fit in 64 bits");
  return l.get_ui();
}

GramMatrix scaled(const GramMatrix& q, const Rational& c) {
  if (sgn(c) <= 0) throw InvalidGram("scaling factor must be positive");
  return GramMatrix(q.matrix().scaled(c));
}

GramMatrix doubled(const GramMatrix& q) { return scaled(q, Rational(2)); }

GramMatrix orthogonal_sum(const GramMatrix& a, const GramMatrix& b) {
  const std::size_t n = a.dim() + b.dim();
  RationalMatrix m(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) m(a.dim() + i, a.dim() + j) = b(i, j);
  return GramMatrix(std::move(m));
}

GramMatrix orthosum_A1(const GramMatrix& q) {
  return orthogonal_sum(q, GramMatrix::diagonal({Rational(2)}));
}

GramMatrix change_basis(const GramMatrix& q, const std::vector<IntVec>& u) {
  const std::size_t n = q.dim();
  if (u.size() != n) throw InvalidGram("basis change matrix has the wrong size");
  RationalMatrix um(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i].size() != n) throw InvalidGram("basis change matrix has the wrong size");
    for (std::size_t j = 0; j < n; ++j) um(i, j) = Rational(static_cast<long>(u[i][j]));
  }
  if (determinant(um) == 0) throw InvalidGram("basis change matrix is singular");
  return GramMatrix(um.transpose() * q.matrix() * um);
}

// --- determinant-1 manifold --------------------------------------------

TangentDirection::TangentDirection(Eigen::MatrixXd b, Eigen::MatrixXd hh)
    : base(std::move(b)), h(std::move(hh)) {
  if (base.rows() != h.rows() || base.cols() != h.cols() || base.rows() != base.cols()) {
    throw DomainError("tangent direction has mismatched dimensions");
  }
  const double scale = std::max(1.0, h.norm());
  if ((h - h.transpose()).norm() > 1e-12 * scale) throw DomainError("tangent direction is not symmetric");
  const double tr = (base.inverse() * h).trace();
  if (std::abs(tr) > 1e-12 * scale) {
    throw DomainError("tangent direction is not trace-orthogonal to base^{-1}");
  }
}

Eigen::MatrixXd exp_map(const TangentDirection& dir, double t) {
  Eigen::LLT<Eigen::MatrixXd> llt(dir.base);
  if (llt.info() != Eigen::Success) throw DomainError("exp_map base is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd linv = l.inverse();
  Eigen::MatrixXd s = linv * dir.h * linv.transpose();
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const Eigen::VectorXd ev = es.eigenvalues() * t;
  const double worst = ev.cwiseAbs().maxCoeff();
  if (!std::isfinite(worst) || worst > 700.0) {
    std::ostringstream os;
    os << "matrix exponential overflows: |t * eigenvalue| = " << worst;
    throw DomainError(os.str());
  }
  const Eigen::MatrixXd v = es.eigenvectors();
  const Eigen::MatrixXd e = v * ev.array().exp().matrix().asDiagonal() * v.transpose();
  Eigen::MatrixXd out = l * e * l.transpose();
  return 0.5 * (out + out.transpose());
}

TangentDirection tangent_project(const Eigen::MatrixXd& q0, const Eigen::MatrixXd& s) {
  const Eigen::MatrixXd qi = q0.inverse();
  const double lambda = (qi * s).trace() / (qi * qi).trace();
  Eigen::MatrixXd h = s - lambda * qi;
  return TangentDirection(q0, 0.5 * (h + h.transpose()));
}

TangentDirection tangent_project(const GramMatrix& q0, const Eigen::MatrixXd& s) {
  return tangent_project(q0.to_eigen(), s);
}

Eigen::MatrixXd normalize_det1(const GramMatrix& q) {
  const double det = determinant(q).get_d();
  return q.to_eigen() / std::pow(det, 1.0 / static_cast<double>(q.dim()));
}

// --- serialization -------------------------------------------------------

namespace {

Rational rational_from_json(const json& v) {
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<std::int64_t>()));
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw ParseError("Gram entries must be integers or rational strings \"p/q\"");
}

LatticeDescriptor parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("gram")) throw ParseError("JSON lattice needs a \"gram\" array");
  const auto& rows = j.at("gram");
  if (!rows.is_array()) throw ParseError("\"gram\" must be an array of rows");
  std::vector<std::vector<Rational>> data;
  for (const auto& row : rows) {
    if (!row.is_array()) throw ParseError("\"gram\" rows must be arrays");
    std::vector<Rational> r;
    for (const auto& v : row) r.push_back(rational_from_json(v));
    data.push_back(std::move(r));
  }
  if (j.contains("n") && j.at("n").get<std::size_t>() != data.size()) {
    throw ParseError("\"n\" does not match the number of Gram rows");
  }
  LatticeDescriptor d{.gram = GramMatrix::from_rows(data)};
  if (j.contains("name") && j["name"].is_string()) d.name = j["name"].get<std::string>();
  if (j.contains("reference_dimM")) d.reference_dimM = j["reference_dimM"].get<int>();
  if (j.contains("reference_N")) d.reference_N = j["reference_N"].get<int>();
  if (j.contains("traditional_name")) d.traditional_name = j["traditional_name"].get<std::string>();
  if (j.contains("incomplete_table")) d.incomplete_table = j["incomplete_table"].get<bool>();
  if (j.contains("note")) d.note = j["note"].get<std::string>();
  return d;
}

LatticeDescriptor parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok)) throw ParseError("empty lattice file");
  std::size_t n = 0;
  try {
    n = std::stoul(tok);
  } catch (const std::exception&) {
    throw ParseError("first token of a text Gram file must be the dimension");
  }
  if (n == 0) throw ParseError("dimension must be positive");
  std::vector<Rational> data;
  while (in >> tok) data.push_back(parse_rational(tok));
  if (data.size() != n * n) {
    throw ParseError("expected " + std::to_string(n * n) + " Gram entries, found " + std::to_string(data.size()));
  }
  return LatticeDescriptor{.gram = GramMatrix(RationalMatrix(n, std::move(data)))};
}

}  // namespace

LatticeDescriptor parse_lattice(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && text[pos] == '{') return parse_json(text);
  return parse_text(text);
}

LatticeDescriptor read_lattice_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lattice(ss.str());
}

std::string gram_to_json(const LatticeDescriptor& d) {
  json j;
  if (d.name) j["name"] = *d.name;
  j["n"] = d.gram.dim();
  json rows = json::array();
  for (std::size_t i = 0; i < d.gram.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < d.gram.dim(); ++k) {
      const Rational& x = d.gram(i, k);
      if (x.get_den() == 1 && x.get_num().fits_slong_p()) {
        row.push_back(x.get_num().get_si());
      } else {
        row.push_back(to_string(x));
      }
    }
    rows.push_back(std::move(row));
  }
  j["gram"] = std::move(rows);
  if (d.reference_dimM) j["reference_dimM"] = *d.reference_dimM;
  if (d.reference_N) j["reference_N"] = *d.reference_N;
  if (d.traditional_name) j["traditional_name"] = *d.traditional_name;
  if (d.incomplete_table) j["incomplete_table"] = true;
  if (d.note) j["note"] = *d.note;
  return j.dump();
}

std::string gram_to_text(const GramMatrix& q) {
  std::ostringstream os;
  os << q.dim() << '\n';
  for (std::size_t i = 0; i < q.dim(); ++i) {
    for (std::size_t j = 0; j < q.dim(); ++j) os << (j ? " " : "") << to_string(q(i, j));
    os << '\n';
  }
  return os.str();
}

}  // namespace latdesign
