#pragma once

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "anc/clock_model.hpp"

namespace anc {

using Complex = std::complex<double>;

inline constexpr double kSpeedOfSound = 343.0;

/// Plane-wave tone travelling along +x:  p(t, x) = p_a exp(j(w0 t - k x)).
class ToneField {
 public:
  ToneField(double amplitude, double angular_frequency, double sound_speed = kSpeedOfSound);

  double amplitude() const noexcept { return amplitude_; }
  double angular_frequency() const noexcept { return angular_frequency_; }
  double sound_speed() const noexcept { return sound_speed_; }
  double wavenumber() const noexcept { return angular_frequency_ / sound_speed_; }

 private:
  double amplitude_;
  double angular_frequency_;
  double sound_speed_;
};

/// Linear FM chirp:  p(t, x) = p_a exp(j(pi m t^2 - k(t) x)),  m = B / T_L,
/// k(t) = sqrt((4 m^2 t^2 + 2 m) / c0^2).  The phase is not wrapped at T_L.
class ChirpField {
 public:
  ChirpField(double amplitude, double bandwidth, double period,
             double sound_speed = kSpeedOfSound);

  double amplitude() const noexcept { return amplitude_; }
  double bandwidth() const noexcept { return bandwidth_; }
  double period() const noexcept { return period_; }
  double sound_speed() const noexcept { return sound_speed_; }
  double chirp_rate() const noexcept { return bandwidth_ / period_; }
  double wavenumber_at(double t) const noexcept;
  /// d/dt of the phase at x = 0, i.e. 2 pi m t.
  double instantaneous_angular_frequency(double t) const noexcept;

 private:
  double amplitude_;
  double bandwidth_;
  double period_;
  double sound_speed_;
};

using Field = std::variant<ToneField, ChirpField>;

Complex tone_pressure(const ToneField& field, double t, double x);
Complex chirp_pressure(const ChirpField& field, double t, double x);
Complex pressure(const Field& field, double t, double x);

double field_amplitude(const Field& field) noexcept;

/// Largest |instantaneous angular frequency| of the field at x = 0 over [t0, t1].
double max_angular_frequency(const Field& field, double t0, double t1) noexcept;

/// Reference-microphone samples p(sample_time(n), 0) for n in
/// [n_start, n_start + n_count). Throws DomainError if n_count <= 0.
std::vector<Complex> sample_reference(const Field& field, const ClockModel& clock,
                                      std::int64_t n_start, std::int64_t n_count);

}  // namespace anc
