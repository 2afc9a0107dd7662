#include "anc/clock_model.hpp"

#include <cmath>
#include <string>

#include "anc/errors.hpp"

namespace anc {

NyquistViolation::NyquistViolation(bool reference_rate_failed, bool effective_rate_failed)
    : DomainError(std::string("Nyquist violation:") +
                  (reference_rate_failed ? " reference rate 1/T_s <= omega0/pi;" : "") +
                  (effective_rate_failed ? " effective rate 1/(T_s+dt) <= omega0/pi;" : "")),
      reference_rate_failed_(reference_rate_failed),
      effective_rate_failed_(effective_rate_failed) {}

DivergenceError::DivergenceError(std::int64_t iteration)
    : std::runtime_error("adaptive filter diverged at iteration " + std::to_string(iteration)),
      iteration_(iteration) {}

double wrap_phase(double radians) noexcept {
  double wrapped = std::fmod(radians, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  // fmod of a tiny negative number can round back up to exactly 2pi
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

ClockModel::ClockModel(double nominal_period, double frequency_error, double initial_phase)
    : nominal_period_(nominal_period),
      frequency_error_(frequency_error),
      initial_phase_(wrap_phase(initial_phase)) {
  if (!(nominal_period > 0.0) || !std::isfinite(nominal_period)) {
    throw DomainError("clock nominal period must be positive and finite");
  }
  if (!std::isfinite(frequency_error) || !(nominal_period + frequency_error > 0.0)) {
    throw DomainError("clock effective period T_s + dt must be positive");
  }
  if (!std::isfinite(initial_phase)) {
    throw DomainError("clock initial phase must be finite");
  }
}

NyquistCheck check_nyquist(const ClockModel& clock, double omega0) {
  if (!(omega0 > 0.0)) throw DomainError("tone angular frequency must be positive");
  const double bound = omega0 / std::numbers::pi;
  return NyquistCheck{
      .reference_rate_ok = 1.0 / clock.nominal_period() > bound,
      .effective_rate_ok = 1.0 / clock.effective_period() > bound,
  };
}

void validate_nyquist(const ClockModel& clock, double omega0) {
  const NyquistCheck check = check_nyquist(clock, omega0);
  if (!check.passed()) {
    throw NyquistViolation(!check.reference_rate_ok, !check.effective_rate_ok);
  }
}

}  // namespace anc
