// errors.hpp -- exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace qdm {

/// Invalid configuration value. `field()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config error [" + field + "]: " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Integration could not proceed (adaptive step underflow).
/// Carries the time at which the integrator gave up.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(double t_fail, const std::string& what)
      : std::runtime_error(what + " (at t = " + std::to_string(t_fail) + " ps)"),
        t_fail_(t_fail) {}

  double t_fail() const noexcept { return t_fail_; }

 private:
  double t_fail_;
};

}  // namespace qdm
