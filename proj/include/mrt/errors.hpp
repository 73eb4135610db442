#pragma once

#include <stdexcept>
#include <string>

namespace mrt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The requested physics lies outside the regime a routine supports.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Bias at or beyond the critical bias: the shallow well no longer exists.
class LeftWellAbsent : public RegimeError {
 public:
  using RegimeError::RegimeError;
};

// Energy outside the interval a semiclassical integral is defined on.
class DomainError : public RegimeError {
 public:
  using RegimeError::RegimeError;
};

// Grid cannot represent the requested states.
class ResolutionError : public RegimeError {
 public:
  using RegimeError::RegimeError;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrt
