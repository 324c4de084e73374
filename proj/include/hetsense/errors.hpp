#pragma once

#include <stdexcept>
#include <string>

namespace hetsense {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration (CLI exit code 3).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// |R_s| + floor(|R_l| / 2) < M: not every target can be covered.
class InfeasibleScenario : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ZeroAngularRate : public Error {
 public:
  using Error::Error;
};

/// Robot and target share a position, so bearing is undefined.
class CoincidentPositions : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class SingularInnovationCovariance : public Error {
 public:
  using Error::Error;
};

/// A runtime invariant check failed (CLI exit code 2).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace hetsense
