#pragma once

#include <stdexcept>
#include <string>

namespace darija {

/// Bad input data: malformed records, invalid UTF-8, duplicate ids,
/// violated preconditions on user-supplied values.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or hyperparameters, detected before any work runs.
class ConfigError : public DataError {
 public:
  using DataError::DataError;
};

/// An internal invariant did not hold. Indicates a bug, not bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace darija
