#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mstab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A kernel was evaluated exactly at one of its singular points.
class SingularEvaluation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series draw produced a non-finite term; carries the offending term index.
class DegenerateDraw : public std::runtime_error {
 public:
  DegenerateDraw(std::size_t term, const std::string& what)
      : std::runtime_error(what), term_(term) {}

  std::size_t term_index() const noexcept { return term_; }

 private:
  std::size_t term_;
};

/// Quadrature did not reach the requested tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

class NonIntegrableKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mstab
