#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latdesign {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input matrix is not a symmetric positive definite Gram matrix.
class InvalidGram : public Error {
 public:
  using Error::Error;
};

/// An operation that requires an even integral form received something else.
class ParityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised at the simple pole s = n/2 of the Epstein zeta function.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The enumeration (or a lattice sum) would exceed its vector budget.
/// `vectors_seen` is the number of vectors produced before giving up.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t vectors_seen)
      : Error(what), vectors_seen_(vectors_seen) {}

  std::size_t vectors_seen() const noexcept { return vectors_seen_; }

 private:
  std::size_t vectors_seen_;
};

}  // namespace latdesign
