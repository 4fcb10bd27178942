#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latdesign/rational.hpp"

namespace latdesign {

/// Exact symmetric positive definite Gram matrix Q of a lattice.
///
/// Construction validates symmetry and positive definiteness (all leading
/// principal minors positive, checked exactly).  The form is also kept as
/// `scaled / denominator` with an integer matrix `scaled`; exact norm
/// evaluation in the hot paths runs on that integer matrix.
class GramMatrix {
 public:
  explicit GramMatrix(RationalMatrix entries);

  static GramMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
  static GramMatrix identity(std::size_t n);
  static GramMatrix diagonal(const std::vector<Rational>& diag);

  std::size_t dim() const noexcept { return q_.dim(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return q_(i, j); }
  const RationalMatrix& matrix() const noexcept { return q_; }

  /// Common denominator d with d*Q integral.
  const Integer& denominator() const noexcept { return den_; }
  /// Entries of d*Q.
  const std::vector<Integer>& scaled_entries() const noexcept { return scaled_; }
  /// d*Q as machine integers, present when every entry fits comfortably.
  const std::optional<std::vector<std::int64_t>>& scaled_small() const noexcept { return small_; }

  bool is_integral() const noexcept { return den_ == 1; }

  /// Q[x] = x^t Q x.
  Rational evaluate(std::span<const std::int64_t> x) const;
  /// x^t Q y.
  Rational inner(std::span<const std::int64_t> x, std::span<const std::int64_t> y) const;
  /// x^t (dQ) x as an exact integer.
  Integer evaluate_scaled(std::span<const std::int64_t> x) const;

  Eigen::MatrixXd to_eigen() const;

  friend bool operator==(const GramMatrix& a, const GramMatrix& b) { return a.q_ == b.q_; }

 private:
  RationalMatrix q_;
  Integer den_;
  std::vector<Integer> scaled_;
  std::optional<std::vector<std::int64_t>> small_;
};

struct LatticeDescriptor {
  std::optional<std::string> name;
  GramMatrix gram;
  std::optional<int> reference_dimM;
  std::optional<int> reference_N;
  std::optional<std::string> traditional_name;
  /// Set for entries of a table the source marks as incomplete.
  bool incomplete_table = false;
  std::optional<std::string> note;

  std::string label() const { return name.value_or("<unnamed>"); }
};

RationalMatrix inverse(const RationalMatrix& m);

GramMatrix gram_inverse(const GramMatrix& q);
Rational determinant(const RationalMatrix& m);
Rational determinant(const GramMatrix& q);

/// Integral with even diagonal.
bool is_even(const GramMatrix& q);

/// Smallest l >= 1 with l * Q^{-1} integral and even on the diagonal.
/// Throws ParityError unless `q` is even.
std::uint64_t level(const GramMatrix& q);

/// Entrywise 2Q (the Gram matrix of sqrt(2) * Lambda).
GramMatrix doubled(const GramMatrix& q);
GramMatrix scaled(const GramMatrix& q, const Rational& c);

/// Block diagonal diag(Q, 2): the orthogonal sum with A1.
GramMatrix orthosum_A1(const GramMatrix& q);
GramMatrix orthogonal_sum(const GramMatrix& a, const GramMatrix& b);

/// U^t Q U for an integer matrix U given as rows (U(i, j) = rows[i][j]).
GramMatrix change_basis(const GramMatrix& q, const std::vector<IntVec>& u);

// --- determinant-1 manifold --------------------------------------------

/// A tangent vector H at `base`, with Tr(base^{-1} H) = 0.
struct TangentDirection {
  Eigen::MatrixXd base;
  Eigen::MatrixXd h;

  /// Validates symmetry of H and trace orthogonality to base^{-1}
  /// (|Tr(base^{-1} H)| <= 1e-12 * max(1, |H|_F)).
  TangentDirection(Eigen::MatrixXd base, Eigen::MatrixXd h);
};

/// Q0 exp(t Q0^{-1} H), evaluated as L exp(t L^{-1} H L^{-t}) L^t through a
/// symmetric eigendecomposition (Q0 = L L^t).
Eigen::MatrixXd exp_map(const TangentDirection& h, double t);

/// S - lambda Q0^{-1} with lambda = <Q0^{-1}, S> / <Q0^{-1}, Q0^{-1}>.
TangentDirection tangent_project(const Eigen::MatrixXd& q0, const Eigen::MatrixXd& s);
TangentDirection tangent_project(const GramMatrix& q0, const Eigen::MatrixXd& s);

/// Q / det(Q)^{1/n} in floating point.
Eigen::MatrixXd normalize_det1(const GramMatrix& q);

// --- serialization -------------------------------------------------------

/// Accepts the JSON object form {"name"?, "n", "gram": [[...]]} or the
/// plain-text form (first token n, then n*n entries).
LatticeDescriptor parse_lattice(const std::string& text);
LatticeDescriptor read_lattice_file(const std::string& path);
std::string gram_to_json(const LatticeDescriptor& d);
std::string gram_to_text(const GramMatrix& q);

}  // namespace latdesign
