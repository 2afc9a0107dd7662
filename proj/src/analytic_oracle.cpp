#include "anc/analytic_oracle.hpp"

#include <cmath>
#include <numbers>

namespace anc {

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  cached_normal_ = radius * std::sin(kTwoPi * u2);
  has_cached_normal_ = true;
  return radius * std::cos(kTwoPi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double sinc(double x) noexcept {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double one_minus_sinc(double x) noexcept {
  const double x2 = x * x;
  if (std::abs(x) < 1e-2) return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  return 1.0 - std::sin(x) / x;
}

double phase_error_density(double dtheta) noexcept {
  return (dtheta >= 0.0 && dtheta <= kTwoPi) ? 1.0 / kTwoPi : 0.0;
}

namespace {

void check_tone_ratio(double omega0, double omega_s) {
  if (!(omega_s > 0.0)) throw DomainError("sampling frequency must be positive");
  if (!(omega0 >= 0.0) || omega0 > 0.5 * omega_s) {
    throw DomainError("tone frequency must lie in [0, omega_s/2]");
  }
}

}  // namespace

double freq_error_residual_power(double w1, double amplitude, double omega0, double dt) {
  const double phase = omega0 * dt;
  if (!(std::abs(phase) < std::numbers::pi)) {
    throw DomainError("|omega0 * dt| must be below pi (Nyquist bound)");
  }
  const double s = std::sin(0.5 * phase);
  // 2(1 - cos x) = 4 sin^2(x/2)
  return 4.0 * w1 * w1 * amplitude * amplitude * s * s;
}

double phase_error_instant_residual(double mean_square_pressure, double omega0, double omega_s,
                                    double dtheta) {
  check_tone_ratio(omega0, omega_s);
  if (!(dtheta >= 0.0 && dtheta <= kTwoPi)) {
    throw DomainError("phase error must lie in [0, 2pi]");
  }
  const double s = std::sin(0.5 * omega0 / omega_s * dtheta);
  return mean_square_pressure * 4.0 * s * s;
}

double phase_error_expected_residual_paper(double mean_square_pressure, double omega0,
                                           double omega_s) {
  check_tone_ratio(omega0, omega_s);
  return 2.0 * mean_square_pressure * one_minus_sinc(std::numbers::pi * omega0 / omega_s);
}

double phase_error_expected_residual_exact(double mean_square_pressure, double omega0,
                                           double omega_s) {
  check_tone_ratio(omega0, omega_s);
  return 2.0 * mean_square_pressure * one_minus_sinc(kTwoPi * omega0 / omega_s);
}

MonteCarloEstimate phase_error_monte_carlo(double mean_square_pressure, double omega0,
                                           double omega_s, std::int64_t n_draws,
                                           std::uint64_t seed) {
  check_tone_ratio(omega0, omega_s);
  const double ratio = omega0 / omega_s;
  return expect_over_uniform_phase(
      [=](double dtheta) {
        const double s = std::sin(0.5 * ratio * dtheta);
        return mean_square_pressure * 4.0 * s * s;
      },
      n_draws, seed);
}

double chirp_residual_sq(double amplitude, double bandwidth, double period, double t,
                         double control_delay, double path_delay, double dtheta,
                         double sample_period) {
  if (!(period > 0.0)) throw DomainError("chirp period must be positive");
  const double m = bandwidth / period;
  const double d = dtheta / kTwoPi * sample_period;
  const double u = t - control_delay - path_delay;
  const double s = std::sin(0.5 * (2.0 * std::numbers::pi * m * u * d + std::numbers::pi * m * d * d));
  return 4.0 * amplitude * amplitude * s * s;
}

double chirp_mean_residual_sq(double amplitude, double bandwidth, double period, double t0,
                              double duration, double control_delay, double path_delay,
                              double dtheta, double sample_period) {
  if (!(period > 0.0)) throw DomainError("chirp period must be positive");
  if (!(duration > 0.0)) throw DomainError("averaging window must be positive");
  const double m = bandwidth / period;
  const double d = dtheta / kTwoPi * sample_period;
  const double slope = 2.0 * std::numbers::pi * m * d;
  const double offset = std::numbers::pi * m * d * d;
  const double u0 = t0 - control_delay - path_delay;
  const double v0 = slope * u0 + offset;
  const double v1 = slope * (u0 + duration) + offset;
  const double span = v1 - v0;
  if (span == 0.0) {
    return chirp_residual_sq(amplitude, bandwidth, period, t0, control_delay, path_delay, dtheta,
                             sample_period);
  }
  // mean of 1 - cos(v) over [v0, v1] = 1 - cos(mid) * sinc(half span)
  const double mid = 0.5 * (v0 + v1);
  const double half = 0.5 * span;
  // written as (1 - cos(mid)) + cos(mid) (1 - sinc(half)) to avoid cancellation
  const double s = std::sin(0.5 * mid);
  const double mean_one_minus_cos = 2.0 * s * s + std::cos(mid) * one_minus_sinc(half);
  return 2.0 * amplitude * amplitude * mean_one_minus_cos;
}

}  // namespace anc
