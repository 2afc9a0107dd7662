#include "anc/signal_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "anc/errors.hpp"

namespace anc {

namespace {

Complex unit_phasor(double phase) { return {std::cos(phase), std::sin(phase)}; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

ToneField::ToneField(double amplitude, double angular_frequency, double sound_speed)
    : amplitude_(amplitude), angular_frequency_(angular_frequency), sound_speed_(sound_speed) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("tone amplitude must be finite and non-negative");
  }
  if (!(angular_frequency > 0.0) || !std::isfinite(angular_frequency)) {
    throw DomainError("tone angular frequency must be positive");
  }
  if (!(sound_speed > 0.0)) throw DomainError("sound speed must be positive");
}

ChirpField::ChirpField(double amplitude, double bandwidth, double period, double sound_speed)
    : amplitude_(amplitude), bandwidth_(bandwidth), period_(period), sound_speed_(sound_speed) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("chirp amplitude must be finite and non-negative");
  }
  if (!(bandwidth > 0.0)) throw DomainError("chirp bandwidth must be positive");
  if (!(period > 0.0)) throw DomainError("chirp period must be positive");
  if (!(sound_speed > 0.0)) throw DomainError("sound speed must be positive");
}

double ChirpField::wavenumber_at(double t) const noexcept {
  const double m = chirp_rate();
  return std::sqrt((4.0 * m * m * t * t + 2.0 * m) / (sound_speed_ * sound_speed_));
}

double ChirpField::instantaneous_angular_frequency(double t) const noexcept {
  return 2.0 * std::numbers::pi * chirp_rate() * t;
}

Complex tone_pressure(const ToneField& field, double t, double x) {
  return field.amplitude() *
         unit_phasor(field.angular_frequency() * t - field.wavenumber() * x);
}

Complex chirp_pressure(const ChirpField& field, double t, double x) {
  const double phase = std::numbers::pi * field.chirp_rate() * t * t;
  // k(t) x vanishes at the reference microphone; skip the sqrt there.
  const double propagation = x == 0.0 ? 0.0 : field.wavenumber_at(t) * x;
  return field.amplitude() * unit_phasor(phase - propagation);
}

Complex pressure(const Field& field, double t, double x) {
  return std::visit(
      Overloaded{[&](const ToneField& f) { return tone_pressure(f, t, x); },
                 [&](const ChirpField& f) { return chirp_pressure(f, t, x); }},
      field);
}

double field_amplitude(const Field& field) noexcept {
  return std::visit([](const auto& f) { return f.amplitude(); }, field);
}

double max_angular_frequency(const Field& field, double t0, double t1) noexcept {
  return std::visit(
      Overloaded{[](const ToneField& f) { return f.angular_frequency(); },
                 [&](const ChirpField& f) {
                   return std::max(std::abs(f.instantaneous_angular_frequency(t0)),
                                   std::abs(f.instantaneous_angular_frequency(t1)));
                 }},
      field);
}

std::vector<Complex> sample_reference(const Field& field, const ClockModel& clock,
                                      std::int64_t n_start, std::int64_t n_count) {
  if (n_count <= 0) throw DomainError("sample_reference needs a positive sample count");
  std::vector<Complex> samples;
  samples.reserve(static_cast<std::size_t>(n_count));
  for (std::int64_t n = n_start; n < n_start + n_count; ++n) {
    samples.push_back(pressure(field, clock.sample_time(n), 0.0));
  }
  return samples;
}

}  // namespace anc
