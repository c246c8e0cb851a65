#pragma once

#include <stdexcept>
#include <string>

namespace lie_iekf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a covariance loses positive semidefiniteness or a state turns
/// non-finite during propagation.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value. `field()` names the offending setting.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace lie_iekf
