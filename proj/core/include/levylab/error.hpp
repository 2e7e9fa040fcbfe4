#pragma once

#include <stdexcept>
#include <string>

namespace levylab {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (out-of-range α, empty grid, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to reach its accuracy target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A quadrature error estimate exceeded its tolerance.
class QuadratureError : public ConvergenceError {
 public:
  QuadratureError(const std::string& what, double worst_angle, double estimate)
      : ConvergenceError(what), worst_angle_(worst_angle), estimate_(estimate) {}

  double worst_angle() const noexcept { return worst_angle_; }
  double estimate() const noexcept { return estimate_; }

 private:
  double worst_angle_;
  double estimate_;
};

}  // namespace levylab
