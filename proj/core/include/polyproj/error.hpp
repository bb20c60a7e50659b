#pragma once

#include <stdexcept>
#include <string>

namespace polyproj {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension (vector length, index set size).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A constructor invariant was violated: non-finite coordinate, zero normal,
/// malformed index set, p <= 1, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A linear system that should have been gated as nonsingular was not.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// A mathematically guaranteed result could not be reproduced numerically
/// (e.g. a mixed basis that must be independent came out singular).
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// The number of halfspaces exceeds the subset-enumeration cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace polyproj
