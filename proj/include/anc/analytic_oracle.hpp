#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <vector>

#include "anc/clock_model.hpp"
#include "anc/errors.hpp"
#include "anc/rng.hpp"

namespace anc {

// ---------------------------------------------------------------------------
// Closed-form residual-error expressions.
//
// The phase-error expectation is provided twice: `_paper` evaluates the
// half-angle form with sinc argument pi*w0/ws, `_exact` is the actual
// mean of 2 - 2cos((w0/ws) dtheta) over dtheta ~ U[0, 2pi], whose sinc
// argument is 2pi*w0/ws. The Monte Carlo estimator converges to `_exact`.
// ---------------------------------------------------------------------------

/// sin(x)/x with the removable singularity filled in.
double sinc(double x) noexcept;
/// 1 - sin(x)/x, accurate for small x.
double one_minus_sinc(double x) noexcept;

/// Density of the initial phase error: 1/(2pi) on [0, 2pi], 0 elsewhere.
double phase_error_density(double dtheta) noexcept;

/// Residual power of a two-tap filter replayed under a per-sample period error:
/// 2 w1^2 p_a^2 (1 - cos(w0 dt)). Requires |w0 dt| < pi.
double freq_error_residual_power(double w1, double amplitude, double omega0, double dt);

/// Instantaneous residual for a given phase error:
/// E{p^2} (2 - 2cos((w0/ws) dtheta)). Requires 0 <= w0 <= ws/2, dtheta in [0, 2pi].
double phase_error_instant_residual(double mean_square_pressure, double omega0, double omega_s,
                                    double dtheta);

/// 2 E{p^2} (1 - sinc(pi w0/ws)), the half-angle form.
double phase_error_expected_residual_paper(double mean_square_pressure, double omega0,
                                           double omega_s);

/// 2 E{p^2} (1 - sinc(2 pi w0/ws)), the exact expectation over U[0, 2pi].
double phase_error_expected_residual_exact(double mean_square_pressure, double omega0,
                                           double omega_s);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_draws = 0;
};

inline constexpr int kMonteCarloShards = 8;

/// Mean of integrand(dtheta) with dtheta ~ U[0, 2pi).
///
/// Draws are split over `shards` shards, shard k seeded with
/// derive_seed(seed, k); shards run concurrently and are merged in index
/// order, so the result is bit-reproducible for a fixed (seed, shards).
template <class Integrand>
MonteCarloEstimate expect_over_uniform_phase(const Integrand& integrand, std::int64_t n_draws,
                                             std::uint64_t seed,
                                             int shards = kMonteCarloShards) {
  if (n_draws < 1) throw DomainError("Monte Carlo needs at least one draw");
  if (shards < 1) throw DomainError("Monte Carlo needs at least one shard");

  struct Moments {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
  };

  auto run_shard = [&integrand, seed](int shard, std::int64_t count) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(shard)));
    Moments m;
    for (std::int64_t i = 0; i < count; ++i) {
      const double value = integrand(kTwoPi * rng.uniform());
      ++m.count;
      const double delta = value - m.mean;
      m.mean += delta / static_cast<double>(m.count);
      m.m2 += delta * (value - m.mean);
    }
    return m;
  };

  const auto n_shards = static_cast<std::int64_t>(std::min<std::int64_t>(shards, n_draws));
  std::vector<std::future<Moments>> pending;
  pending.reserve(static_cast<std::size_t>(n_shards));
  for (std::int64_t k = 0; k < n_shards; ++k) {
    const std::int64_t count = n_draws / n_shards + (k < n_draws % n_shards ? 1 : 0);
    pending.push_back(std::async(std::launch::async, run_shard, static_cast<int>(k), count));
  }

  // Chan et al. pairwise merge, always in shard order.
  Moments total;
  for (auto& f : pending) {
    const Moments m = f.get();
    if (total.count == 0) {
      total = m;
      continue;
    }
    const auto n = static_cast<double>(total.count + m.count);
    const double delta = m.mean - total.mean;
    total.mean += delta * static_cast<double>(m.count) / n;
    total.m2 += m.m2 + delta * delta * static_cast<double>(total.count) *
                           static_cast<double>(m.count) / n;
    total.count += m.count;
  }

  MonteCarloEstimate est;
  est.mean = total.mean;
  est.n_draws = total.count;
  est.std_error = total.count > 1 ? std::sqrt(total.m2 / static_cast<double>(total.count - 1) /
                                              static_cast<double>(total.count))
                                  : 0.0;
  return est;
}

/// Monte Carlo estimate of the phase-error expectation.
MonteCarloEstimate phase_error_monte_carlo(double mean_square_pressure, double omega0,
                                           double omega_s, std::int64_t n_draws,
                                           std::uint64_t seed);

/// Squared chirp residual at time t under phase error dtheta:
/// 2 p_a^2 {1 - cos[2 pi m (t - t_c - t_s) d + pi m d^2]},  d = (dtheta/2pi) T_samp.
double chirp_residual_sq(double amplitude, double bandwidth, double period, double t,
                         double control_delay, double path_delay, double dtheta,
                         double sample_period);

/// Exact time average of chirp_residual_sq over [t0, t0 + duration].
double chirp_mean_residual_sq(double amplitude, double bandwidth, double period, double t0,
                              double duration, double control_delay, double path_delay,
                              double dtheta, double sample_period);

}  // namespace anc
