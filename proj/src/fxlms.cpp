#include "anc/fxlms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anc/errors.hpp"
#include "anc/rng.hpp"

namespace anc {

namespace {

constexpr std::int64_t kDivergenceBlock = 1000;
constexpr double kDivergenceGrowth = 10.0;

double fir_at(std::span<const double> taps, const std::vector<double>& signal, std::int64_t n) {
  double acc = 0.0;
  const auto len = static_cast<std::int64_t>(taps.size());
  for (std::int64_t k = 0; k < len && k <= n; ++k) {
    acc += taps[static_cast<std::size_t>(k)] * signal[static_cast<std::size_t>(n - k)];
  }
  return acc;
}

/// The plant the training loop actually drives: the continuous delay seen
/// through DAC and ADC at the same rate, long enough to be near-exact.
FixedFilter discrete_plant(const SecondaryPath& path, double sample_period) {
  const double delay = path.delay() / sample_period;
  const auto taps = static_cast<std::size_t>(std::floor(delay)) + 2 * kPathEstimateHalfWidth + 1;
  return estimate_secondary_path(path, sample_period, taps);
}

}  // namespace

FixedFilter estimate_secondary_path(const SecondaryPath& path, double sample_period,
                                    std::size_t n_taps) {
  if (!(sample_period > 0.0)) throw DomainError("sample period must be positive");
  if (n_taps == 0) throw DomainError("path estimate needs at least one tap");
  const double delay = path.delay() / sample_period;
  if (!(static_cast<double>(n_taps) > delay)) {
    throw DomainError("too few taps for the requested secondary path delay");
  }

  std::vector<double> taps(n_taps, 0.0);
  const double nearest = std::round(delay);
  if (std::abs(delay - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    taps[static_cast<std::size_t>(nearest)] = 1.0;
    return FixedFilter(std::move(taps));
  }

  const auto whole = static_cast<std::int64_t>(std::floor(delay));
  const auto last = static_cast<std::int64_t>(n_taps) - 1;
  const std::int64_t half_width =
      std::min<std::int64_t>({whole + 1, last - whole, kPathEstimateHalfWidth});
  if (half_width < 1) {
    throw DomainError("too few taps to straddle a fractional secondary path delay");
  }
  for (std::int64_t k = whole - half_width + 1; k <= whole + half_width; ++k) {
    taps[static_cast<std::size_t>(k)] = windowed_sinc_kernel(
        static_cast<double>(k) - delay, static_cast<int>(half_width), kPathEstimateBeta);
  }
  return FixedFilter(std::move(taps));
}

double fxlms_step_bound(const ToneField& tone, const TrainingConfig& config) {
  const Complex path_gain = config.secondary_path_estimate.frequency_response(
      tone.angular_frequency(), config.sample_period);
  // Real tone of amplitude p_a has power p_a^2 / 2.
  const double filtered_power =
      0.5 * tone.amplitude() * tone.amplitude() * std::norm(path_gain);
  if (!(filtered_power > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 / (static_cast<double>(config.n_taps) * filtered_power);
}

TrainingResult train_fxlms(const ToneField& tone, const SecondaryPath& true_path,
                           const TrainingConfig& config, std::uint64_t seed) {
  if (config.n_taps == 0) throw DomainError("control filter needs at least one tap");
  if (config.n_iterations < 1) throw DomainError("training needs at least one iteration");
  if (config.measure_samples < 1) throw DomainError("measurement window must be positive");
  if (!(config.step_size >= 0.0)) throw DomainError("step size must be non-negative");
  if (!(config.measurement_noise_rms >= 0.0)) throw DomainError("noise level must be non-negative");
  validate_nyquist(ClockModel(config.sample_period), tone.angular_frequency());
  const double bound = fxlms_step_bound(tone, config);
  if (!(config.step_size < bound)) {
    throw DomainError("step size exceeds the LMS stability bound 2/(L P_x)");
  }

  const FixedFilter plant = discrete_plant(true_path, config.sample_period);
  const auto plant_taps = plant.coefficients();
  const auto model_taps = config.secondary_path_estimate.coefficients();
  const double period = config.sample_period;

  auto reference = [&](std::int64_t n) {
    return tone_pressure(tone, static_cast<double>(n) * period, 0.0).real();
  };
  auto disturbance = [&](std::int64_t n) {
    return tone_pressure(tone, static_cast<double>(n) * period, config.mic_distance).real();
  };

  const auto n_iter = static_cast<std::size_t>(config.n_iterations);
  std::vector<double> weights(config.n_taps, 0.0);
  std::vector<double> x(n_iter), y(n_iter), xf(n_iter);

  TrainingResult result;
  result.convergence_trace.resize(n_iter);

  Rng rng(seed);
  double block_energy = 0.0;
  double previous_block = -1.0;
  const auto n_weights = static_cast<std::int64_t>(config.n_taps);

  for (std::int64_t n = 0; n < config.n_iterations; ++n) {
    const auto i = static_cast<std::size_t>(n);
    x[i] = reference(n);
    y[i] = fir_at(weights, x, n);
    xf[i] = fir_at(model_taps, x, n);
    const double anti = fir_at(plant_taps, y, n);
    const double error = disturbance(n) + anti + config.measurement_noise_rms * rng.normal();
    if (!std::isfinite(error)) throw DivergenceError(n);

    const double step = config.step_size * error;
    for (std::int64_t k = 0; k < n_weights && k <= n; ++k) {
      weights[static_cast<std::size_t>(k)] -= step * xf[static_cast<std::size_t>(n - k)];
    }

    result.convergence_trace[i] = error * error;
    block_energy += error * error;
    if ((n + 1) % kDivergenceBlock == 0) {
      if (previous_block > 0.0 && block_energy > kDivergenceGrowth * previous_block) {
        throw DivergenceError(n);
      }
      previous_block = block_energy;
      block_energy = 0.0;
    }
  }

  result.filter = FixedFilter(weights);

  // Frozen-loop measurement from a cold start, noise free, after the filter
  // and plant memories have filled.
  const auto warmup = static_cast<std::int64_t>(weights.size() + plant_taps.size());
  const std::int64_t total = warmup + config.measure_samples;
  std::vector<double> fx(static_cast<std::size_t>(total)), fy(static_cast<std::size_t>(total));
  double d_power = 0.0;
  double e_power = 0.0;
  for (std::int64_t n = 0; n < total; ++n) {
    const auto i = static_cast<std::size_t>(n);
    fx[i] = reference(n);
    fy[i] = fir_at(weights, fx, n);
    const double d = disturbance(n);
    const double e = d + fir_at(plant_taps, fy, n);
    if (n >= warmup) {
      d_power += d * d;
      e_power += e * e;
    }
  }
  result.loop_disturbance_power = d_power / static_cast<double>(config.measure_samples);
  result.loop_residual_power = e_power / static_cast<double>(config.measure_samples);
  result.loop_reduction_db =
      noise_reduction_db(result.loop_disturbance_power, result.loop_residual_power);
  return result;
}

double noise_reduction_db(double before_power, double after_power) {
  if (!(before_power > 0.0)) throw DomainError("reference power must be positive");
  if (!(after_power >= 0.0)) throw DomainError("residual power must be non-negative");
  if (after_power == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(before_power / after_power);
}

}  // namespace anc
