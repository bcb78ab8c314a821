#pragma once

#include <stdexcept>
#include <string>

namespace attsync {

/// A value violates a type invariant (non-symmetric inertia, bad gain, ...).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario or topology configuration cannot be used as given.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical blow-up detected while integrating.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, int spacecraft, double time)
      : std::runtime_error(what), spacecraft_(spacecraft), time_(time) {}

  int spacecraft() const { return spacecraft_; }
  double time() const { return time_; }

private:
  int spacecraft_;
  double time_;
};

}  // namespace attsync
