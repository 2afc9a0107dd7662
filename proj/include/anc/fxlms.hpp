#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "anc/signal_gen.hpp"
#include "anc/time_sim.hpp"

namespace anc {

/// Offline identification result for a pure-delay secondary path: a
/// Kaiser-windowed sinc fractional delay, symmetric about the delay and as wide
/// as n_taps allows (capped at kPathEstimateHalfWidth).
///
/// Throws DomainError if the delay does not fit inside n_taps.
FixedFilter estimate_secondary_path(const SecondaryPath& path, double sample_period,
                                    std::size_t n_taps);

inline constexpr int kPathEstimateHalfWidth = 32;
inline constexpr double kPathEstimateBeta = 6.0;

struct TrainingConfig {
  double step_size = 0.002;
  std::size_t n_taps = 32;
  std::int64_t n_iterations = 80000;
  /// Discrete model of the secondary path used to filter the reference.
  FixedFilter secondary_path_estimate = FixedFilter({1.0});
  double sample_period = 1.0 / 16000.0;
  /// Reference-to-error microphone spacing l.
  double mic_distance = 1.0;
  /// RMS of white Gaussian sensor noise added to the error signal during
  /// adaptation (not during the frozen-loop measurement).
  double measurement_noise_rms = 1e-3;
  /// Samples used to measure the frozen loop after training.
  std::int64_t measure_samples = 16000;
};

struct TrainingResult {
  FixedFilter filter{std::vector<double>{0.0}};
  /// e[n]^2 for every adaptation step.
  std::vector<double> convergence_trace;
  double loop_disturbance_power = 0.0;
  double loop_residual_power = 0.0;
  /// Reduction of the trained filter, frozen, in the discrete training loop.
  double loop_reduction_db = 0.0;
};

/// Classical bound 2 / (L P_x) with P_x the filtered-reference power of the
/// (real) tone.
double fxlms_step_bound(const ToneField& tone, const TrainingConfig& config);

/// Filtered-x LMS on the real part of the tone, perfect clocks, zero initial
/// weights:  e[n] = d[n] + (s * y)[n] + v[n],   w <- w - mu e[n] x'[n - i].
///
/// Throws DomainError for an unstable step size or a tone above Nyquist and
/// DivergenceError if the error energy of a 1000-sample block exceeds ten
/// times that of the previous block.
TrainingResult train_fxlms(const ToneField& tone, const SecondaryPath& true_path,
                           const TrainingConfig& config, std::uint64_t seed);

/// 10 log10(before / after); +infinity when after == 0.
double noise_reduction_db(double before_power, double after_power);

/// Plain-text coefficient file: "n_taps=<N> fs=<Hz>" then one coefficient per
/// line, printed with 17 significant digits so a round trip is exact.
void write_filter(std::ostream& out, const FixedFilter& filter, double sample_rate);

struct LoadedFilter {
  FixedFilter filter{std::vector<double>{0.0}};
  double sample_rate;
};

/// Throws DomainError on a malformed file.
LoadedFilter read_filter(std::istream& in);

}  // namespace anc
