#include "latdesign/rational.hpp"

#include <cctype>

#include "latdesign/errors.hpp"

namespace latdesign {

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den) || den.front() == '-') {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  auto strip_plus = [](std::string_view s) { return s.front() == '+' ? s.substr(1) : s; };
  Integer p(std::string(strip_plus(num)));
  Integer q(std::string(strip_plus(den)));
  if (q == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Integer& value) { return value.get_str(); }

Integer from_int128(__int128 value) {
  bool neg = value < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(value) : static_cast<unsigned __int128>(value);
  Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  Integer out = (hi << 64) + lo;
  return neg ? Integer(-out) : out;
}

RationalMatrix::RationalMatrix(std::size_t n, std::vector<Rational> row_major)
    : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n_ * n_) throw InvalidGram("matrix data does not have n*n entries");
  for (auto& x : a_) x.canonicalize();
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Rational RationalMatrix::trace() const {
  Rational t = 0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  RationalMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const Rational& aik = (*this)(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  RationalMatrix r(*this);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] += o.a_[k];
  return r;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  RationalMatrix r(*this);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] -= o.a_[k];
  return r;
}

RationalMatrix RationalMatrix::scaled(const Rational& c) const {
  RationalMatrix r(*this);
  for (auto& x : r.a_) x *= c;
  return r;
}

Rational RationalMatrix::trace_product(const RationalMatrix& o) const {
  Rational t = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t += (*this)(i, j) * o(j, i);
  return t;
}

}  // namespace latdesign
