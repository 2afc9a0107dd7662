#include <catch_amalgamated.hpp>

#include <numbers>

#include "anc/clock_model.hpp"
#include "anc/errors.hpp"

using namespace anc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

constexpr double kPi = std::numbers::pi;

TEST_CASE("sample_time on a reference clock is uniform sampling") {
  const ClockModel clock(1.0);
  CHECK(clock.sample_time(5) == 5.0);
  CHECK(clock.is_reference());
  for (std::int64_t n = -10; n <= 10; ++n) CHECK(ClockModel(1e-3).sample_time(n) == n * 1e-3);
}

TEST_CASE("sample_time with a frequency error") {
  CHECK_THAT(ClockModel(1e-3, 1e-6).sample_time(1000), WithinRel(1.001, 1e-14));
}

TEST_CASE("sample_time with a phase offset is a constant shift") {
  CHECK_THAT(ClockModel(1e-3, 0.0, kPi).sample_time(0), WithinRel(5e-4, 1e-15));
}

TEST_CASE("sample_time is affine in n") {
  const ClockModel clock(1.0 / 16000.0, 3e-7, 1.3);
  const double step = clock.effective_period();
  for (std::int64_t n : {-1000000LL, -7LL, 0LL, 1LL, 999LL, 123456789LL}) {
    CHECK_THAT(clock.sample_time(n + 1) - clock.sample_time(n),
               WithinAbs(step, 1e-12 * std::max(1.0, std::abs(clock.sample_time(n)))));
  }
}

TEST_CASE("phase is wrapped into [0, 2pi)") {
  CHECK_THAT(ClockModel(1.0, 0.0, 2.0 * kPi + 0.5).initial_phase(), WithinAbs(0.5, 1e-15));
  CHECK_THAT(ClockModel(1.0, 0.0, -0.5).initial_phase(), WithinAbs(kTwoPi - 0.5, 1e-15));
  CHECK(ClockModel(1.0, 0.0, kTwoPi).initial_phase() == 0.0);
  for (double raw : {-100.0, -kTwoPi, -1e-300, 0.0, 3.0, 1e6}) {
    const double w = wrap_phase(raw);
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
  }
}

TEST_CASE("clock construction rejects invalid periods") {
  CHECK_THROWS_AS(ClockModel(0.0), DomainError);
  CHECK_THROWS_AS(ClockModel(-1.0), DomainError);
  CHECK_THROWS_AS(ClockModel(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(ClockModel(1.0, -2.0), DomainError);
  CHECK_THROWS_AS(ClockModel(1.0, 0.0, std::numeric_limits<double>::infinity()), DomainError);
  CHECK_NOTHROW(ClockModel(1.0, -0.5));
}

TEST_CASE("validate_nyquist passes well below Nyquist") {
  CHECK_NOTHROW(validate_nyquist(ClockModel(1.0 / 16000.0), kTwoPi * 100.0));
}

TEST_CASE("validate_nyquist names the first inequality") {
  try {
    validate_nyquist(ClockModel(1.0 / 16000.0), kTwoPi * 9000.0);
    FAIL("expected a Nyquist violation");
  } catch (const NyquistViolation& e) {
    CHECK(e.reference_rate_failed());
    CHECK(e.effective_rate_failed());
  }
}

TEST_CASE("validate_nyquist names only the second inequality") {
  try {
    validate_nyquist(ClockModel(1.0 / 16000.0, 1.0 / 16000.0), kTwoPi * 5000.0);
    FAIL("expected a Nyquist violation");
  } catch (const NyquistViolation& e) {
    CHECK_FALSE(e.reference_rate_failed());
    CHECK(e.effective_rate_failed());
  }
}

TEST_CASE("with dt = 0 both inequalities coincide") {
  const ClockModel clock(1.0 / 8000.0);
  for (double f : {100.0, 3999.0, 4000.5, 4001.0, 7000.0}) {
    const NyquistCheck check = check_nyquist(clock, kTwoPi * f);
    CHECK(check.reference_rate_ok == check.effective_rate_ok);
    CHECK(check.passed() == (f < 4000.0));
  }
}

TEST_CASE("a faster error clock relaxes only the effective-rate bound") {
  const NyquistCheck check = check_nyquist(ClockModel(1.0 / 8000.0, -1e-5), kTwoPi * 4100.0);
  CHECK_FALSE(check.reference_rate_ok);
  CHECK(check.effective_rate_ok);
}

TEST_CASE("passing validate_nyquist bounds omega0 * dt below pi") {
  const double ts = 1.0 / 16000.0;
  for (double dt : {-0.4 * ts, -0.1 * ts, 0.0, 0.3 * ts, 0.9 * ts}) {
    const ClockModel clock(ts, dt);
    for (double f : {50.0, 1000.0, 4000.0, 7999.0}) {
      if (check_nyquist(clock, kTwoPi * f).passed()) CHECK(std::abs(kTwoPi * f * dt) < kPi);
    }
  }
}

TEST_CASE("check_nyquist requires a positive frequency") {
  CHECK_THROWS_AS(check_nyquist(ClockModel(1.0), 0.0), DomainError);
}
