#pragma once

#include <stdexcept>

namespace garchvb {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameter outside its valid region (omega <= 0, alpha+beta >= 1, nu <= 2, ...).
struct ConstraintViolation : Error {
  using Error::Error;
};

/// NaN/Inf encountered where a finite value is required.
struct NonFiniteError : Error {
  using Error::Error;
};

/// Input series unusable (empty, too short, or zero variance).
struct DegenerateSeries : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Operation requires the other Cholesky factorization of q.
struct WrongFactorization : Error {
  using Error::Error;
};

struct InsufficientSamples : Error {
  using Error::Error;
};

/// Malformed input file; message carries the 1-based row number.
struct ParseError : Error {
  using Error::Error;
};

/// Invalid command-line / config combination.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace garchvb
