#pragma once

#include <stdexcept>
#include <string>

namespace gle {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix shape or symmetry mismatch, bad mode index.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Scalar parameter outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix violates the uncertainty principle.
class PhysicalityError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a property the input does not have (e.g. purity).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Singular or ill-conditioned linear algebra.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Requested computation exceeds a configured size limit.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace gle
