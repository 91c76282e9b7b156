#pragma once

#include <stdexcept>
#include <string>

namespace hotspots {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the envelope where the accuracy contract holds.
class UnsupportedRangeError : public Error {
 public:
  using Error::Error;
};

/// A root scan ran out of budget (or range) before finding enough roots.
class SearchExhaustedError : public Error {
 public:
  using Error::Error;
};

/// A bracket handed to a bisection does not contain a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Sign normalization of an eigenfunction is impossible.
class DegenerateNormalizationError : public Error {
 public:
  using Error::Error;
};

/// A grid cannot resolve the requested geometry.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A discrete domain violates a structural invariant (e.g. it is disconnected).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to meet its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hotspots
