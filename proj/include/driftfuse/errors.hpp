#pragma once

#include <stdexcept>
#include <string>

namespace driftfuse {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value handed to an operation violates its preconditions
/// (non-finite input, confidence outside [0,1], zero-norm quaternion, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Bad parameters or files at setup time (friction >= 1, negative variance,
/// unknown config key, degenerate track, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unusable input data encountered while processing logs.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Pitch within 1e-6 of +-pi/2: Euler extraction is not well defined there.
class DegenerateAttitudeError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

}  // namespace driftfuse
