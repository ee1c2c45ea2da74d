#pragma once

#include <stdexcept>
#include <string>

namespace csamp {

/// Query point dimension does not match the body dimension.
class DimensionMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An oracle was requested that the body does not implement.
class CapabilityMissingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The body cannot certify B(0,1) as a subset of itself.
class A1ViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rejection-sampling loop hit its hard cap; signals misconfiguration.
class RejectionBudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The cutting-plane iteration cap was hit before certification.
class IterationBudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss of positive definiteness or similar numerical breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedBodyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptySampleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientChainsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hit-and-run bisection could not bracket the chord.
class DegenerateChordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-and-Out declared failure under the halt policy.
class SamplingFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad command line; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace csamp
