#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace anc {

/// Raised when an argument lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One or both sampling clocks are too slow for the requested tone.
class NyquistViolation : public DomainError {
 public:
  NyquistViolation(bool reference_rate_failed, bool effective_rate_failed);

  /// 1/T_s > omega0/pi failed.
  bool reference_rate_failed() const noexcept { return reference_rate_failed_; }
  /// 1/(T_s + dt) > omega0/pi failed.
  bool effective_rate_failed() const noexcept { return effective_rate_failed_; }

 private:
  bool reference_rate_failed_;
  bool effective_rate_failed_;
};

/// The disturbance cannot be reached through the secondary paths.
class InfeasibleCancellation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A multichannel scenario does not cancel perfectly at zero phase error.
class PremiseViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Anti-noise was requested before enough samples exist to produce it.
class HorizonError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A simulation produced NaN or infinity.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive training blew up.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(std::int64_t iteration);
  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

}  // namespace anc
