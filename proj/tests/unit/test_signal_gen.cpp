#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "anc/errors.hpp"
#include "anc/rng.hpp"
#include "anc/signal_gen.hpp"

using namespace anc;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

void check_complex(Complex got, Complex want, double tol) {
  CHECK_THAT(got.real(), WithinAbs(want.real(), tol));
  CHECK_THAT(got.imag(), WithinAbs(want.imag(), tol));
}

}  // namespace

TEST_CASE("tone at the origin is one") {
  check_complex(tone_pressure(ToneField(1.0, kTwoPi), 0.0, 0.0), {1.0, 0.0}, 1e-15);
}

TEST_CASE("tone a quarter period later is j") {
  check_complex(tone_pressure(ToneField(1.0, kTwoPi), 0.25, 0.0), {0.0, 1.0}, 1e-15);
}

TEST_CASE("tone at x = 0.343 m, 100 Hz") {
  check_complex(tone_pressure(ToneField(2.0, kTwoPi * 100.0, 343.0), 0.0, 0.343),
                {1.61803398874989, -1.17557050458495}, 1e-13);
}

TEST_CASE("chirp at the origin is one") {
  check_complex(chirp_pressure(ChirpField(1.0, 1000.0, 1.0), 0.0, 0.0), {1.0, 0.0}, 1e-15);
}

TEST_CASE("chirp phase is quadratic in time") {
  check_complex(chirp_pressure(ChirpField(1.0, 1000.0, 1.0), 0.01, 0.0),
                {0.951056516295154, 0.309016994374947}, 1e-13);
}

TEST_CASE("chirp wavenumber at t = 0 is sqrt(2m)/c0") {
  const ChirpField chirp(1.0, 1000.0, 1.0, 343.0);
  CHECK_THAT(chirp.wavenumber_at(0.0), WithinAbs(0.130382972448967, 1e-14));
  check_complex(chirp_pressure(chirp, 0.0, 1.0), {0.991512174695785, -0.130013873990567}, 1e-13);
}

TEST_CASE("fields are unit-modulus scaled by the amplitude") {
  Rng rng(7);
  const ToneField tone(2.5, kTwoPi * 440.0);
  const ChirpField chirp(0.7, 2000.0, 0.3);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(-5.0, 5.0);
    const double x = rng.uniform(0.0, 10.0);
    CHECK_THAT(std::abs(tone_pressure(tone, t, x)), WithinAbs(2.5, 1e-13));
    CHECK_THAT(std::abs(chirp_pressure(chirp, t, x)), WithinAbs(0.7, 1e-13));
  }
}

TEST_CASE("tone propagation is a pure delay") {
  Rng rng(11);
  const ToneField tone(1.0, kTwoPi * 250.0);
  for (int i = 0; i < 100; ++i) {
    const double t = rng.uniform(0.0, 1.0);
    const double l = rng.uniform(0.0, 3.0);
    check_complex(tone_pressure(tone, t, l), tone_pressure(tone, t - l / kSpeedOfSound, 0.0), 1e-11);
  }
}

TEST_CASE("uniformly sampled tone walks the eighth roots of unity") {
  const auto samples = sample_reference(ToneField(1.0, kTwoPi * 1000.0), ClockModel(1.0 / 8000.0), 0, 8);
  REQUIRE(samples.size() == 8);
  for (int n = 0; n < 8; ++n) {
    check_complex(samples[n], std::polar(1.0, kTwoPi * n / 8.0), 1e-14);
  }
}

TEST_CASE("a phase offset multiplies every tone sample by one constant") {
  const ToneField tone(1.0, kTwoPi * 1000.0);
  const double ts = 1.0 / 8000.0;
  const auto base = sample_reference(tone, ClockModel(ts), 0, 8);
  const auto shifted = sample_reference(tone, ClockModel(ts, 0.0, kPi), 0, 8);
  const Complex factor{0.923879532511287, 0.38268343236509};
  for (int n = 0; n < 8; ++n) check_complex(shifted[n], base[n] * factor, 1e-13);
}

TEST_CASE("phase-shift property holds for arbitrary offsets and long runs") {
  Rng rng(3);
  const ToneField tone(1.3, kTwoPi * 777.0);
  const double ts = 1.0 / 16000.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double dtheta = rng.uniform(0.0, kTwoPi);
    const auto base = sample_reference(tone, ClockModel(ts), 1000, 64);
    const auto shifted = sample_reference(tone, ClockModel(ts, 0.0, dtheta), 1000, 64);
    const Complex factor = std::polar(1.0, tone.angular_frequency() * dtheta / kTwoPi * ts);
    for (std::size_t n = 0; n < base.size(); ++n) {
      CHECK(std::abs(shifted[n] - base[n] * factor) <= 1e-12 * tone.amplitude());
    }
  }
}

TEST_CASE("sampled chirp matches the shifted quadratic phase") {
  const ChirpField chirp(1.0, 1000.0, 1.0);
  const double ts = 1e-3;
  for (double dtheta : {0.0, 0.4, kPi, 5.0}) {
    const auto samples = sample_reference(chirp, ClockModel(ts, 0.0, dtheta), 0, 50);
    for (int n = 0; n < 50; ++n) {
      const double t = n * ts + dtheta / kTwoPi * ts;
      check_complex(samples[n], std::polar(1.0, kPi * 1000.0 * t * t), 1e-12);
    }
  }
}

TEST_CASE("sample_reference needs a positive count") {
  CHECK_THROWS_AS(sample_reference(ToneField(1.0, 1.0), ClockModel(1.0), 0, 0), DomainError);
}

TEST_CASE("field constructors reject invalid parameters") {
  CHECK_THROWS_AS(ToneField(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(ToneField(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(ToneField(1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(ChirpField(1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ChirpField(1.0, 1.0, 0.0), DomainError);
  CHECK_NOTHROW(ToneField(0.0, 1.0));
}

TEST_CASE("wavenumber is derived from frequency and sound speed") {
  const ToneField tone(1.0, 686.0, 343.0);
  CHECK(tone.wavenumber() == 2.0);
  CHECK(ChirpField(1.0, 500.0, 2.0).chirp_rate() == 250.0);
}

TEST_CASE("maximum chirp frequency sits at a window edge") {
  const ChirpField chirp(1.0, 1000.0, 1.0);
  CHECK_THAT(max_angular_frequency(chirp, 0.0, 0.5), WithinAbs(kTwoPi * 500.0, 1e-9));
  CHECK_THAT(max_angular_frequency(chirp, -0.8, 0.5), WithinAbs(kTwoPi * 800.0, 1e-9));
  CHECK(max_angular_frequency(ToneField(1.0, 3.0), 0.0, 100.0) == 3.0);
}
