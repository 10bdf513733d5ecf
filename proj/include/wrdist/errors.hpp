#pragma once

#include <stdexcept>
#include <string>

namespace wrd {

// Malformed input files, degenerate numeric data, unscorable pairs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent options or missing required inputs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

// Raised when a vector is too short to define a direction.
class ZeroNormError : public DataError {
 public:
  using DataError::DataError;
};

// A sentence had no usable tokens after filtering.
class EmptyBagError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace wrd
