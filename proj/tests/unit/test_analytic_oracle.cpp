#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "anc/analytic_oracle.hpp"

using namespace anc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kWs = kTwoPi * 16000.0;
}  // namespace

TEST_CASE("sinc and its complement") {
  CHECK(sinc(0.0) == 1.0);
  CHECK_THAT(sinc(kPi / 2), WithinRel(2.0 / kPi, 1e-15));
  CHECK_THAT(sinc(kPi), WithinAbs(0.0, 1e-16));
  // Small-argument series against the textbook expansion.
  for (double x : {1e-8, 1e-5, 3e-3, 9e-3, 0.011, 0.05}) {
    const double series = x * x / 6.0 - std::pow(x, 4) / 120.0 + std::pow(x, 6) / 5040.0 -
                          std::pow(x, 8) / 362880.0;
    CHECK_THAT(one_minus_sinc(x), WithinRel(series, 1e-10));
  }
}

TEST_CASE("phase error density integrates to one") {
  CHECK(phase_error_density(-0.1) == 0.0);
  CHECK(phase_error_density(kTwoPi + 0.1) == 0.0);
  const int n = 100000;
  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    integral += phase_error_density(-1.0 + (kTwoPi + 2.0) * (i + 0.5) / n) * (kTwoPi + 2.0) / n;
  }
  CHECK_THAT(integral, WithinAbs(1.0, 1e-4));
}

TEST_CASE("frequency-error residual") {
  CHECK(freq_error_residual_power(1.0, 1.0, kTwoPi * 100.0, 0.0) == 0.0);
  CHECK_THAT(freq_error_residual_power(0.5, 2.0, kTwoPi * 100.0, 1e-4),
             WithinRel(0.00394654314345688, 1e-13));
  // Supremum as omega0 dt approaches pi.
  CHECK_THAT(freq_error_residual_power(1.0, 1.0, 1.0, kPi * (1 - 1e-9)), WithinAbs(4.0, 1e-12));
  CHECK_THROWS_AS(freq_error_residual_power(1.0, 1.0, 1.0, kPi), DomainError);
  CHECK_THROWS_AS(freq_error_residual_power(1.0, 1.0, 1.0, -4.0), DomainError);
}

TEST_CASE("frequency-error residual is even in dt") {
  for (double dt : {1e-7, 3e-6, 2e-5, 4.9e-4}) {
    CHECK(freq_error_residual_power(0.7, 1.3, kTwoPi * 1000.0, dt) ==
          freq_error_residual_power(0.7, 1.3, kTwoPi * 1000.0, -dt));
  }
}

TEST_CASE("instantaneous phase-error residual") {
  CHECK(phase_error_instant_residual(1.0, 0.3 * kWs, kWs, 0.0) == 0.0);
  CHECK_THAT(phase_error_instant_residual(1.0, 0.5 * kWs, kWs, kPi), WithinRel(2.0, 1e-15));
  CHECK_THAT(phase_error_instant_residual(3.0, 0.25 * kWs, kWs, kTwoPi * 0.999),
             WithinRel(5.99057522591501, 1e-13));
  for (int i = 0; i <= 50; ++i) {
    for (double ratio : {0.0, 0.1, 0.37, 0.5}) {
      CHECK(phase_error_instant_residual(1.0, ratio * kWs, kWs, kTwoPi * i / 50.0) >= 0.0);
    }
  }
  CHECK_THROWS_AS(phase_error_instant_residual(1.0, 0.6 * kWs, kWs, 1.0), DomainError);
  CHECK_THROWS_AS(phase_error_instant_residual(1.0, 0.1 * kWs, kWs, -0.1), DomainError);
  CHECK_THROWS_AS(phase_error_instant_residual(1.0, 0.1 * kWs, kWs, 7.0), DomainError);
}

TEST_CASE("half-angle expectation") {
  CHECK(phase_error_expected_residual_paper(1.0, 0.0, kWs) == 0.0);
  CHECK_THAT(phase_error_expected_residual_paper(1.0, 0.5 * kWs, kWs),
             WithinRel(0.726760455264837, 1e-13));
  CHECK_THAT(phase_error_expected_residual_paper(1.0, 0.25 * kWs, kWs),
             WithinRel(0.199367367685788, 1e-13));
}

TEST_CASE("exact expectation") {
  CHECK(phase_error_expected_residual_exact(1.0, 0.0, kWs) == 0.0);
  CHECK_THAT(phase_error_expected_residual_exact(1.0, 0.5 * kWs, kWs), WithinRel(2.0, 1e-15));
  CHECK_THAT(phase_error_expected_residual_exact(1.0, 0.25 * kWs, kWs),
             WithinRel(0.726760455264837, 1e-13));
  CHECK(phase_error_expected_residual_exact(1.0, 1e-9 * kWs, kWs) < 1e-15);
}

TEST_CASE("exact expectation equals a direct quadrature of the instantaneous residual") {
  for (double ratio : {0.01, 0.13, 0.25, 0.41, 0.5}) {
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += phase_error_instant_residual(2.0, ratio * kWs, kWs, kTwoPi * (i + 0.5) / n);
    }
    CHECK_THAT(sum / n, WithinRel(phase_error_expected_residual_exact(2.0, ratio * kWs, kWs), 1e-7));
  }
}

TEST_CASE("both expectations increase with frequency") {
  double prev_paper = -1.0, prev_exact = -1.0;
  for (int i = 1; i < 500; ++i) {
    const double w0 = 0.5 * kWs * i / 500.0;
    const double paper = phase_error_expected_residual_paper(1.0, w0, kWs);
    const double exact = phase_error_expected_residual_exact(1.0, w0, kWs);
    CHECK(paper > prev_paper);
    CHECK(exact > prev_exact);
    prev_paper = paper;
    prev_exact = exact;
  }
}

TEST_CASE("expectations reject frequencies outside [0, ws/2]") {
  CHECK_THROWS_AS(phase_error_expected_residual_exact(1.0, -1.0, kWs), DomainError);
  CHECK_THROWS_AS(phase_error_expected_residual_paper(1.0, 0.51 * kWs, kWs), DomainError);
  CHECK_THROWS_AS(phase_error_monte_carlo(1.0, 0.6 * kWs, kWs, 10, 1), DomainError);
}

TEST_CASE("Monte Carlo is exactly zero at zero frequency") {
  for (std::uint64_t seed : {1ULL, 99ULL}) {
    const MonteCarloEstimate mc = phase_error_monte_carlo(1.0, 0.0, kWs, 1000, seed);
    CHECK(mc.mean == 0.0);
    CHECK(mc.std_error == 0.0);
    CHECK(mc.n_draws == 1000);
  }
}

TEST_CASE("Monte Carlo agrees with the exact expectation") {
  const MonteCarloEstimate mc = phase_error_monte_carlo(1.0, 0.25 * kWs, kWs, 1'000'000, 20230609);
  CHECK(std::abs(mc.mean - 0.726760455264837) < 3.0 * mc.std_error);
  // The half-angle expectation is many standard errors away.
  CHECK(std::abs(mc.mean - 0.199367367685788) > 100.0 * mc.std_error);
}

TEST_CASE("Monte Carlo with two seeds differs but stays consistent") {
  const auto a = phase_error_monte_carlo(1.0, 0.25 * kWs, kWs, 1'000'000, 1);
  const auto b = phase_error_monte_carlo(1.0, 0.25 * kWs, kWs, 1'000'000, 2);
  CHECK(a.mean != b.mean);
  CHECK(std::abs(a.mean - b.mean) < 6.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("Monte Carlo is bit-reproducible for a seed") {
  const auto a = phase_error_monte_carlo(1.0, 0.37 * kWs, kWs, 100001, 42);
  const auto b = phase_error_monte_carlo(1.0, 0.37 * kWs, kWs, 100001, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.n_draws == 100001);
}

TEST_CASE("Monte Carlo deviation stays below five standard errors across seeds") {
  int within = 0;
  const int seeds = 100;
  const double exact = phase_error_expected_residual_exact(1.0, 0.3 * kWs, kWs);
  for (int s = 0; s < seeds; ++s) {
    const auto mc = phase_error_monte_carlo(1.0, 0.3 * kWs, kWs, 100'000, 1000 + s);
    if (std::abs(mc.mean - exact) < 5.0 * mc.std_error) ++within;
  }
  CHECK(within >= 99);
}

TEST_CASE("shard merge matches a single-stream mean") {
  auto f = [](double x) { return std::cos(x) + x; };
  const auto sharded = expect_over_uniform_phase(f, 1000, 5, 8);
  const auto single = expect_over_uniform_phase(f, 1000, 5, 1);
  // Different streams, same target: mean of cos(x) + x is pi.
  CHECK_THAT(sharded.mean, WithinAbs(kPi, 5.0 * sharded.std_error));
  CHECK_THAT(single.mean, WithinAbs(kPi, 5.0 * single.std_error));
  CHECK(expect_over_uniform_phase(f, 3, 5, 8).n_draws == 3);
  CHECK_THROWS_AS(expect_over_uniform_phase(f, 0, 5), DomainError);
}

TEST_CASE("rng helpers") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  Rng g(9);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double z = g.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK_THAT(sum / 200000, WithinAbs(0.0, 0.01));
  CHECK_THAT(sum2 / 200000, WithinAbs(1.0, 0.01));
}

TEST_CASE("chirp residual at the aligned instant") {
  CHECK(chirp_residual_sq(1.0, 1000.0, 1.0, 0.3, 0.1, 0.2, 0.0, 1e-3) == 0.0);
  CHECK_THAT(chirp_residual_sq(1.0, 1000.0, 1.0, 0.3, 0.1, 0.2, kPi, 1e-3),
             WithinRel(6.16850243359397e-7, 1e-9));
  CHECK_THAT(chirp_residual_sq(1.0, 1000.0, 100.0, 0.3, 0.1, 0.2, kPi, 1e-3),
             WithinRel(6.16850275064914e-11, 1e-9));
}

TEST_CASE("chirp residual decreases toward zero with the chirp period") {
  double prev = std::numeric_limits<double>::infinity();
  for (double tl : {0.5, 1.0, 2.0, 10.0, 100.0, 1e4, 1e6}) {
    const double r = chirp_residual_sq(1.0, 1000.0, tl, 0.25, 0.0, 0.0, 2.0, 1.0 / 16000.0);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("chirp window mean equals a fine quadrature") {
  const double ts = 1.0 / 16000.0;
  for (double tl : {0.1, 1.0, 10.0}) {
    const double t0 = 0.002, dur = tl;
    const int n = 400000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += chirp_residual_sq(1.0, 1000.0, tl, t0 + dur * (i + 0.5) / n, 0.0, 0.001, kPi, ts);
    }
    CHECK_THAT(chirp_mean_residual_sq(1.0, 1000.0, tl, t0, dur, 0.0, 0.001, kPi, ts),
               WithinRel(sum / n, 1e-6));
  }
  CHECK(chirp_mean_residual_sq(1.0, 1000.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, ts) == 0.0);
  CHECK_THROWS_AS(chirp_mean_residual_sq(1.0, 1000.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, ts),
                  DomainError);
}
