#pragma once

#include <stdexcept>
#include <string>

namespace sparselv {

/// Raised for malformed configuration, arguments, or input files.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot deliver a usable answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The fixed-point iteration x <- 1 + Mx is blowing up, i.e. ||M|| >= 1
/// in practice (spectral radius at or above one).
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sparselv
