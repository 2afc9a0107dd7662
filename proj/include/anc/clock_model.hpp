#pragma once

#include <cstdint>
#include <numbers>

namespace anc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A sampling clock: nominal period T_s, a constant per-sample period offset
/// (frequency error) and a constant initial phase offset in radians.
///
/// Sample n is taken at  n * (T_s + dt) + (phase / 2pi) * T_s.
class ClockModel {
 public:
  /// Throws DomainError unless nominal_period > 0 and
  /// nominal_period + frequency_error > 0. The phase is wrapped into [0, 2pi).
  explicit ClockModel(double nominal_period, double frequency_error = 0.0,
                      double initial_phase = 0.0);

  static ClockModel reference(double nominal_period) { return ClockModel(nominal_period); }

  double nominal_period() const noexcept { return nominal_period_; }
  double frequency_error() const noexcept { return frequency_error_; }
  double initial_phase() const noexcept { return initial_phase_; }

  /// T_s + dt: spacing between consecutive samples.
  double effective_period() const noexcept { return nominal_period_ + frequency_error_; }
  /// Constant time shift produced by the initial phase, (phase / 2pi) * T_s.
  double phase_delay() const noexcept { return initial_phase_ / kTwoPi * nominal_period_; }
  /// omega_s = 2pi / T_s.
  double angular_sampling_frequency() const noexcept { return kTwoPi / nominal_period_; }

  bool is_reference() const noexcept { return frequency_error_ == 0.0 && initial_phase_ == 0.0; }

  double sample_time(std::int64_t n) const noexcept {
    return static_cast<double>(n) * effective_period() + phase_delay();
  }

  friend bool operator==(const ClockModel&, const ClockModel&) = default;

 private:
  double nominal_period_;
  double frequency_error_;
  double initial_phase_;
};

/// Outcome of checking both sampling rates against a tone frequency.
struct NyquistCheck {
  bool reference_rate_ok = false;
  bool effective_rate_ok = false;
  bool passed() const noexcept { return reference_rate_ok && effective_rate_ok; }
};

/// Non-throwing form. omega0 must be positive.
NyquistCheck check_nyquist(const ClockModel& clock, double omega0);

/// Throws NyquistViolation naming the failing inequality (or both).
/// On success |omega0 * dt| < pi holds.
void validate_nyquist(const ClockModel& clock, double omega0);

/// Wrap an angle into [0, 2pi).
double wrap_phase(double radians) noexcept;

}  // namespace anc
