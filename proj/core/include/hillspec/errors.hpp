#pragma once

#include <stdexcept>
#include <string>

namespace hillspec {

/// Base class for numerical failures raised by the solver. Argument
/// validation failures use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// The backward basis collapsed at the match point (|Delta| underflowed).
class DegenerateBasisError : public Error {
 public:
  using Error::Error;
};

/// A derivative sweep produced non-finite values.
class ScalingFault : public Error {
 public:
  using Error::Error;
};

/// Numerator and denominator of the density formula vanish together; the
/// variational formulas must be used instead.
class IndeterminatePointError : public Error {
 public:
  IndeterminatePointError(const std::string& what, double lambda)
      : Error(what), lambda_(lambda) {}
  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
};

/// The requested operation needs lambda strictly inside a stability interval.
class OutOfBandError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class UnsupportedBoundaryError : public Error {
 public:
  using Error::Error;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace hillspec
