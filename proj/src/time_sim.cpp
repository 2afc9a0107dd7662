#include "anc/time_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "anc/errors.hpp"

namespace anc {

FixedFilter::FixedFilter(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw DomainError("filter needs at least one tap");
  for (double w : coefficients_) {
    if (!std::isfinite(w)) throw DomainError("filter coefficients must be finite");
  }
}

Complex FixedFilter::frequency_response(double omega, double tap_spacing) const {
  Complex response{0.0, 0.0};
  for (std::size_t n = 0; n < coefficients_.size(); ++n) {
    const double phase = -omega * static_cast<double>(n) * tap_spacing;
    response += coefficients_[n] * Complex{std::cos(phase), std::sin(phase)};
  }
  return response;
}

SecondaryPath::SecondaryPath(double delay) : delay_(delay) {
  if (!(delay >= 0.0) || !std::isfinite(delay)) {
    throw DomainError("secondary path delay must be finite and non-negative");
  }
}

ReconstructionFilter ReconstructionFilter::windowed_sinc(int half_width, double shape) {
  if (half_width < 8) throw DomainError("windowed-sinc half width must be at least 8");
  if (!(shape >= 0.0)) throw DomainError("window shape parameter must be non-negative");
  return ReconstructionFilter{Mode::windowed_sinc, half_width, shape};
}

double windowed_sinc_kernel(double x, int half_width, double beta) noexcept {
  const double r = x / static_cast<double>(half_width);
  if (std::abs(r) >= 1.0) return 0.0;
  const double px = std::numbers::pi * x;
  const double core = std::abs(px) < 1e-12 ? 1.0 : std::sin(px) / px;
  const double window =
      std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - r * r)) / std::cyl_bessel_i(0.0, beta);
  return core * window;
}

namespace {

constexpr double kHorizonSlack = 1e-12;

double slowest_period(const SimScenario& s) {
  return std::max(s.reference_clock.effective_period(), s.error_clock.effective_period());
}

/// Anti-noise produced when the reference is sampled with `clock` and the DAC
/// runs at the clock's period without its phase offset.
Complex antinoise_with_clock(const SimScenario& s, const ClockModel& clock, double t) {
  const double period = clock.effective_period();
  const double shift = clock.phase_delay();
  const double t_out = t - s.secondary_path.delay();
  const auto taps = s.filter.coefficients();

  if (s.reconstruction.mode == ReconstructionFilter::Mode::closed_form) {
    Complex sum{0.0, 0.0};
    for (std::size_t n = 0; n < taps.size(); ++n) {
      if (taps[n] == 0.0) continue;
      sum += taps[n] * pressure(s.field, t_out - static_cast<double>(n) * period + shift, 0.0);
    }
    return sum;
  }

  const int hw = s.reconstruction.half_width;
  const double beta = s.reconstruction.window_shape;
  const double u = t_out / period;
  const auto m0 = static_cast<std::int64_t>(std::floor(u));
  const std::int64_t m_lo = m0 - hw + 1;
  const std::int64_t m_hi = m0 + hw;
  const auto n_taps = static_cast<std::int64_t>(taps.size());

  // x[first .. m_hi] covers every input the output samples m_lo..m_hi need.
  const std::int64_t first = m_lo - (n_taps - 1);
  const std::vector<Complex> x = sample_reference(s.field, clock, first, m_hi - first + 1);

  Complex sum{0.0, 0.0};
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double k = windowed_sinc_kernel(u - static_cast<double>(m), hw, beta);
    if (k == 0.0) continue;
    Complex y{0.0, 0.0};
    for (std::int64_t n = 0; n < n_taps; ++n) {
      y += taps[static_cast<std::size_t>(n)] * x[static_cast<std::size_t>(m - n - first)];
    }
    sum += k * y;
  }
  return sum;
}

void check_horizon(const SimScenario& s, double t) {
  const double start = transient_length(s);
  if (t < start - kHorizonSlack * std::max(1.0, std::abs(start))) {
    throw HorizonError("time precedes the simulation horizon (transient not settled)");
  }
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

double transient_length(const SimScenario& s) {
  const auto taps = static_cast<double>(s.filter.size());
  return s.secondary_path.delay() +
         (taps - 1.0 + static_cast<double>(s.reconstruction.support())) * slowest_period(s);
}

SimScenario& use_default_window(SimScenario& s) {
  s.measure_start = transient_length(s);
  const double omega = max_angular_frequency(s.field, s.measure_start, s.measure_start);
  if (!(omega > 0.0)) throw DomainError("field has no oscillation to size a window from");
  s.measure_duration = kDefaultMeasurePeriods * kTwoPi / omega;
  return s;
}

void validate_scenario(const SimScenario& s) {
  if (!s.reference_clock.is_reference()) {
    throw DomainError("reference clock must have zero frequency and phase error");
  }
  if (s.reference_clock.nominal_period() != s.error_clock.nominal_period()) {
    throw DomainError("reference and error clocks must share a nominal period");
  }
  if (!(s.measure_duration > 0.0)) throw DomainError("measurement window must be positive");
  if (s.points_per_period < 2) throw DomainError("need at least 2 points per period");
  if (!(s.mic_distance >= 0.0)) throw DomainError("microphone distance must be non-negative");
  const double start = transient_length(s);
  if (s.measure_start < start - kHorizonSlack * std::max(1.0, std::abs(start))) {
    throw DomainError("measurement starts before the transient has passed");
  }

  // Highest frequency any sample in the window sees: look back over the
  // filter and kernel span, forward over the kernel span.
  const double span = slowest_period(s);
  const double t_lo = s.measure_start - transient_length(s) - span;
  const double t_hi = s.measure_start + s.measure_duration +
                      static_cast<double>(s.reconstruction.support() + 1) * span;
  const double omega_max = max_angular_frequency(s.field, t_lo, t_hi);
  if (omega_max > 0.0) validate_nyquist(s.error_clock, omega_max);
}

Complex antinoise_at(const SimScenario& s, double t) {
  check_horizon(s, t);
  return antinoise_with_clock(s, s.error_clock, t);
}

Complex disturbance_at(const SimScenario& s, double t) {
  switch (s.disturbance) {
    case DisturbanceModel::plane_wave:
      return pressure(s.field, t, s.mic_distance);
    case DisturbanceModel::filter_replay:
      check_horizon(s, t);
      return -antinoise_with_clock(s, s.reference_clock, t);
  }
  return {};
}

ResidualReport run_scenario(const SimScenario& s) {
  validate_scenario(s);

  const double t0 = s.measure_start;
  const double t1 = s.measure_start + s.measure_duration;
  const double omega_hi = max_angular_frequency(s.field, t0, t1);
  std::int64_t n_points = s.points_per_period;
  if (omega_hi > 0.0) {
    const double periods = s.measure_duration * omega_hi / kTwoPi;
    n_points = std::max<std::int64_t>(
        n_points, static_cast<std::int64_t>(std::ceil(periods * s.points_per_period)));
  }
  const double step = s.measure_duration / static_cast<double>(n_points);

  ResidualReport report;
  if (s.keep_series) {
    report.sample_series.emplace();
    report.sample_series->reserve(static_cast<std::size_t>(n_points));
  }

  CompensatedSum residual;
  CompensatedSum disturbance;
  for (std::int64_t i = 0; i < n_points; ++i) {
    const double t = t0 + (static_cast<double>(i) + 0.5) * step;
    const Complex d = disturbance_at(s, t);
    const Complex e = d + antinoise_with_clock(s, s.error_clock, t);
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
      throw NumericalFailure("non-finite residual sample");
    }
    residual.add(std::norm(e));
    disturbance.add(std::norm(d));
    if (s.keep_series) report.sample_series->emplace_back(t, e);
  }

  report.residual_power = residual.value() / static_cast<double>(n_points);
  report.disturbance_power = disturbance.value() / static_cast<double>(n_points);
  report.reduction_db = report.residual_power > 0.0
                            ? 10.0 * std::log10(report.disturbance_power / report.residual_power)
                            : std::numeric_limits<double>::infinity();
  return report;
}

double full_sum_freq_error_residual(const FixedFilter& filter, double amplitude, double omega0,
                                    double sample_period, double dt, double path_delay) {
  if (!(path_delay >= 0.0)) throw DomainError("secondary path delay must be non-negative");
  validate_nyquist(ClockModel(sample_period, dt), omega0);
  // |exp(j w0 (t - t_s))| = 1, so the average over t is the squared modulus of
  // the tap sum alone.
  Complex sum{0.0, 0.0};
  for (std::size_t n = 0; n < filter.size(); ++n) {
    const double nd = static_cast<double>(n);
    const double base = -omega0 * nd * sample_period;
    const double skew = -omega0 * nd * dt;
    // exp(j skew) - 1 = 2j sin(skew/2) exp(j skew/2)
    const Complex drift = 2.0 * Complex{0.0, std::sin(0.5 * skew)} *
                          Complex{std::cos(0.5 * skew), std::sin(0.5 * skew)};
    sum += filter[n] * Complex{std::cos(base), std::sin(base)} * drift;
  }
  return amplitude * amplitude * std::norm(sum);
}

FixedFilter design_cancelling_filter(const ToneField& tone, double mic_distance,
                                     double sample_period, const SecondaryPath& path,
                                     std::size_t n_taps) {
  if (n_taps == 0) throw DomainError("filter needs at least one tap");
  const double omega = tone.angular_frequency();
  const double lag = mic_distance / tone.sound_speed() - path.delay();
  const Complex target = -Complex{std::cos(-omega * lag), std::sin(-omega * lag)};

  if (n_taps == 1) {
    if (std::abs(target.imag()) > 1e-12) {
      throw InfeasibleCancellation("a single real tap cannot produce the required phase");
    }
    return FixedFilter({target.real()});
  }

  // Rows of A: Re G = sum w_n cos(n phi), Im G = -sum w_n sin(n phi).
  // Minimum-norm solution w = A^T (A A^T)^{-1} [Re z, Im z].
  const double phi = omega * sample_period;
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
  for (std::size_t n = 0; n < n_taps; ++n) {
    const double c = std::cos(static_cast<double>(n) * phi);
    const double s = -std::sin(static_cast<double>(n) * phi);
    a11 += c * c;
    a12 += c * s;
    a22 += s * s;
  }
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) < 1e-12 * (a11 * a22 + 1e-300)) {
    throw InfeasibleCancellation("tone sits on a filter null; cannot design a real canceller");
  }
  const double l1 = (a22 * target.real() - a12 * target.imag()) / det;
  const double l2 = (-a12 * target.real() + a11 * target.imag()) / det;
  std::vector<double> w(n_taps);
  for (std::size_t n = 0; n < n_taps; ++n) {
    w[n] = l1 * std::cos(static_cast<double>(n) * phi) - l2 * std::sin(static_cast<double>(n) * phi);
  }
  return FixedFilter(std::move(w));
}

FixedFilter negating_delay_filter(double control_delay, double sample_period) {
  if (!(sample_period > 0.0)) throw DomainError("sample period must be positive");
  if (!(control_delay >= 0.0)) throw DomainError("control delay must be non-negative");
  const double taps = control_delay / sample_period;
  const double k = std::round(taps);
  if (std::abs(taps - k) > 1e-9 * std::max(1.0, k)) {
    throw DomainError("control delay must be a whole number of samples");
  }
  std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
  w.back() = -1.0;
  return FixedFilter(std::move(w));
}

}  // namespace anc
