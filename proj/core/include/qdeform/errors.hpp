#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdeform {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Series or product exceeded the representable floating-point range.
class OverflowError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A truncated q-sum did not meet its stopping rule within the term budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t terms)
      : Error(what), terms_(terms) {}
  std::size_t terms() const noexcept { return terms_; }

 private:
  std::size_t terms_;
};

/// Two lattice objects that must share a lattice do not.
class LatticeMismatchError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& what, double measured_norm)
      : Error(what), measured_norm_(measured_norm) {}
  double measured_norm() const noexcept { return measured_norm_; }

 private:
  double measured_norm_;
};

class EigenSolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV or JSON input.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdeform
