#pragma once

#include <stdexcept>
#include <string>

namespace zbw {

// Base of every error the library throws. Callers that only care about
// "the numerics went wrong" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Power series did not reach the requested tolerance.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Matrix representation is singular or too badly conditioned to invert.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// A complex 4x4 matrix is not the image of a real multivector.
class RepresentationError : public Error {
 public:
  using Error::Error;
};

// Input has grades the operation does not accept.
class GradeError : public Error {
 public:
  using Error::Error;
};

class RotorConstraintError : public Error {
 public:
  using Error::Error;
};

// psi * reverse(psi) vanishes, so no (rho, beta, R) split exists.
class SingularSpinorError : public Error {
 public:
  explicit SingularSpinorError(const std::string& what, double tau = 0.0)
      : Error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

class MassShellError : public Error {
 public:
  using Error::Error;
};

// Raised by the integrator; carries the proper time of the failing step.
class NumericalOverflowError : public Error {
 public:
  NumericalOverflowError(const std::string& what, double tau)
      : Error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

// Not enough samples (or not enough time span) for the requested estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Frenet analysis asked for a curve whose tangent is not time-like.
class NullCurveError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace zbw
