#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bosepath {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its cap. `best` carries the last residual or
/// value reached so callers can report it.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best)
      : Error(what), best_(best) {}
  double best() const { return best_; }

 private:
  double best_;
};

/// Quadrature could neither certify convergence nor divergence.
class IndeterminateError : public Error {
 public:
  IndeterminateError(const std::string& what, std::vector<double> partial_sums)
      : Error(what), partial_sums_(std::move(partial_sums)) {}
  const std::vector<double>& partial_sums() const { return partial_sums_; }

 private:
  std::vector<double> partial_sums_;
};

/// The zero-energy scattering problem has no nonnegative increasing solution.
class NoAdmissibleSolution : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo estimator rejected every replica.
class ZeroAcceptanceError : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant that should hold by construction was violated.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bosepath

namespace bosepath {

/// An integral the caller required to be finite diverges.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace bosepath
