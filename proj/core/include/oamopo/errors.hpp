#pragma once

#include <stdexcept>
#include <string>

namespace oamopo {

/// Raised when an input lies outside an operation's domain (zero-intensity
/// mode, non-unit Stokes vector, degenerate path, unsupported regime).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an integration produces non-finite values or overflows.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double time);

  /// Simulation time at which the failure was detected.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace oamopo
