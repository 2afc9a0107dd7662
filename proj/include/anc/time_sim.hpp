#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "anc/clock_model.hpp"
#include "anc/signal_gen.hpp"

namespace anc {

/// Frozen FIR control filter w_0 .. w_{N-1}.
class FixedFilter {
 public:
  /// Throws DomainError if empty or any coefficient is non-finite.
  explicit FixedFilter(std::vector<double> coefficients);

  std::size_t size() const noexcept { return coefficients_.size(); }
  double operator[](std::size_t i) const { return coefficients_[i]; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }

  /// G(w) = sum_n w_n exp(-j w n T).
  Complex frequency_response(double omega, double tap_spacing) const;

  friend bool operator==(const FixedFilter&, const FixedFilter&) = default;

 private:
  std::vector<double> coefficients_;
};

/// Free-field secondary path: a pure delay.
class SecondaryPath {
 public:
  explicit SecondaryPath(double delay);
  double delay() const noexcept { return delay_; }

 private:
  double delay_;
};

// Kaiser beta for the reconstruction kernel. At 32 taps either side a 100 Hz tone
// is reconstructed to within 1e-6 of the ideal interpolant.
inline constexpr double kDefaultKaiserBeta = 11.0;

/// How the DAC output is turned back into continuous time.
///
/// closed_form evaluates the ideal low-pass reconstruction analytically (exact
/// for tones and for chirps below Nyquist). windowed_sinc interpolates the
/// digital output sequence with a Kaiser-tapered sinc of the given half width.
struct ReconstructionFilter {
  enum class Mode { closed_form, windowed_sinc };

  Mode mode = Mode::closed_form;
  int half_width = 0;
  double window_shape = 0.0;

  static ReconstructionFilter closed_form() { return {}; }
  /// Throws DomainError if half_width < 8 or shape < 0.
  static ReconstructionFilter windowed_sinc(int half_width = 64, double shape = kDefaultKaiserBeta);

  /// Samples the kernel reaches on each side (0 in closed_form mode).
  int support() const noexcept { return mode == Mode::windowed_sinc ? half_width : 0; }
};

/// Kaiser-windowed sinc evaluated at offset x (in samples); zero for |x| >= half_width.
double windowed_sinc_kernel(double x, int half_width, double beta) noexcept;

/// What the error microphone hears when the control loop is silent.
enum class DisturbanceModel {
  /// The travelling primary field p(t, l).
  plane_wave,
  /// The negated anti-noise the same filter produces on the reference clock,
  /// i.e. the filter cancels exactly when the clocks agree.
  filter_replay,
};

struct SimScenario {
  Field field;
  double mic_distance = 0.0;
  ClockModel reference_clock;
  ClockModel error_clock;
  FixedFilter filter;
  SecondaryPath secondary_path;
  ReconstructionFilter reconstruction;
  DisturbanceModel disturbance = DisturbanceModel::plane_wave;
  double measure_start = 0.0;
  double measure_duration = 0.0;
  /// Evaluation points per period of the highest frequency in the window.
  int points_per_period = 16;
  bool keep_series = false;
};

struct ResidualReport {
  double residual_power = 0.0;
  double disturbance_power = 0.0;
  /// +infinity when the residual is exactly zero.
  double reduction_db = 0.0;
  std::optional<std::vector<std::pair<double, Complex>>> sample_series;
};

/// Earliest time at which every sample the anti-noise (and a filter-replay
/// disturbance) depends on has been taken, counting from sample 0.
double transient_length(const SimScenario& scenario);

inline constexpr int kDefaultMeasurePeriods = 50;

/// Start measuring right after the transient and average over
/// kDefaultMeasurePeriods periods of the highest frequency present then.
SimScenario& use_default_window(SimScenario& scenario);

/// Throws DomainError / NyquistViolation if the scenario is inconsistent.
void validate_scenario(const SimScenario& scenario);

/// Reconstructed, filtered, delayed anti-noise at the error microphone.
/// Throws HorizonError if t precedes transient_length().
Complex antinoise_at(const SimScenario& scenario, double t);

/// Disturbance at the error microphone per scenario.disturbance.
Complex disturbance_at(const SimScenario& scenario, double t);

/// e(t) = disturbance + anti-noise, averaged over the measurement window.
ResidualReport run_scenario(const SimScenario& scenario);

/// Time-averaged |e|^2 when every tap of the filter is kept:
/// p_a^2 |sum_n w_n exp(-j w0 n T_s) (exp(-j w0 n dt) - 1)|^2.
double full_sum_freq_error_residual(const FixedFilter& filter, double amplitude, double omega0,
                                    double sample_period, double dt, double path_delay);

/// Minimum-norm real filter with G(w0) exp(-j w0 t_s) = -exp(-j k l), i.e. one
/// that cancels the tone at distance l with perfect clocks. Throws
/// InfeasibleCancellation if n_taps cannot reach the required phase.
FixedFilter design_cancelling_filter(const ToneField& tone, double mic_distance,
                                     double sample_period, const SecondaryPath& path,
                                     std::size_t n_taps);

/// Single tap of -1 at index t_c / T_s. Throws DomainError unless t_c is a
/// non-negative integer multiple of the sample period.
FixedFilter negating_delay_filter(double control_delay, double sample_period);

}  // namespace anc
