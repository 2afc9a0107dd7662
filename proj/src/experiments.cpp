#include "anc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <thread>

#include "anc/analytic_oracle.hpp"
#include "anc/errors.hpp"
#include "anc/multichannel.hpp"
#include "anc/time_sim.hpp"

namespace anc {

namespace {

constexpr double kPi = std::numbers::pi;

/// Runs body(i) for i in [0, n) on all hardware threads. Callers write into
/// slot i of a preallocated buffer, so output order never depends on timing.
template <class Body>
void parallel_for(std::size_t n, const Body& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Cell seed_cell(std::uint64_t seed) { return std::to_string(seed); }

Table new_table(const SweepSpec& spec, std::vector<std::pair<std::string, std::string>> extra,
                std::vector<std::string> columns) {
  Table t;
  t.provenance.emplace_back("experiment", std::string(experiment_name(spec.experiment)));
  t.provenance.emplace_back("fs", num(spec.fs));
  for (auto& kv : extra) t.provenance.push_back(std::move(kv));
  t.columns = std::move(columns);
  return t;
}

FixedFilter load_or_default_filter(const SweepSpec& spec) {
  if (spec.filter_path.empty()) return FixedFilter({0.0, 1.0});
  std::ifstream in(spec.filter_path);
  if (!in) throw std::ios_base::failure("cannot open filter file " + spec.filter_path);
  return read_filter(in).filter;
}

SimScenario tone_scenario(const ToneField& tone, double sample_period, const ClockModel& error_clock,
                          FixedFilter filter, double path_delay, DisturbanceModel disturbance,
                          double mic_distance,
                          ReconstructionFilter reconstruction = ReconstructionFilter::closed_form()) {
  SimScenario s{
      .field = tone,
      .mic_distance = mic_distance,
      .reference_clock = ClockModel::reference(sample_period),
      .error_clock = error_clock,
      .filter = std::move(filter),
      .secondary_path = SecondaryPath(path_delay),
      .reconstruction = reconstruction,
      .disturbance = disturbance,
  };
  use_default_window(s);
  return s;
}

SimScenario chirp_scenario(const ChirpField& chirp, double sample_period, double dtheta,
                           double control_delay, double path_delay) {
  SimScenario s{
      .field = chirp,
      .mic_distance = 0.0,
      .reference_clock = ClockModel::reference(sample_period),
      .error_clock = ClockModel(sample_period, 0.0, dtheta),
      .filter = negating_delay_filter(control_delay, sample_period),
      .secondary_path = SecondaryPath(path_delay),
      .reconstruction = ReconstructionFilter::closed_form(),
      .disturbance = DisturbanceModel::filter_replay,
  };
  // One pulse: the control delay and path delay line up t - t_c - t_s = 0
  // with the start of the window.
  s.measure_start = transient_length(s);
  s.measure_duration = chirp.period();
  return s;
}

double relative_deviation(double measured, double expected) {
  const double scale = std::abs(expected);
  return scale > 0.0 ? std::abs(measured - expected) / scale : std::abs(measured - expected);
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::figure5, Experiment::freq_error, Experiment::chirp,
                       Experiment::multichannel, Experiment::train, Experiment::validate}) {
    if (experiment_name(e) == name) return e;
  }
  return std::nullopt;
}

std::string_view experiment_name(Experiment experiment) {
  switch (experiment) {
    case Experiment::figure5: return "figure5";
    case Experiment::freq_error: return "freq_error";
    case Experiment::chirp: return "chirp";
    case Experiment::multichannel: return "multichannel";
    case Experiment::train: return "train";
    case Experiment::validate: return "validate";
  }
  return "unknown";
}

SweepSpec default_spec(Experiment experiment, double fs) {
  SweepSpec spec;
  spec.experiment = experiment;
  spec.fs = fs;
  spec.fmin = 0.001 * fs;
  spec.fmax = 0.49 * fs;
  spec.dt = 0.5 / fs;
  switch (experiment) {
    case Experiment::figure5:
      spec.points = 100;
      break;
    case Experiment::freq_error:
      spec.points = 21;
      spec.f0 = 1000.0;
      break;
    case Experiment::chirp:
      spec.points = 4;
      spec.log_spacing = true;
      break;
    case Experiment::multichannel:
      spec.points = 10;
      break;
    case Experiment::train:
      spec.f0 = 200.0;
      spec.path_delay_samples = 10.0;
      spec.draws = 1000;
      break;
    case Experiment::validate:
      spec.f0 = 200.0;
      spec.path_delay_samples = 10.0;
      break;
  }
  return spec;
}

void check_spec(const SweepSpec& s) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DomainError(what);
  };
  require(s.fs > 0.0 && std::isfinite(s.fs), "--fs must be positive");
  require(s.draws >= 1, "--draws must be at least 1");
  require(s.path_delay_samples >= 0.0, "path delay must be non-negative");
  require(s.control_delay_samples >= 0.0, "control delay must be non-negative");
  const double nyquist = 0.5 * s.fs;
  switch (s.experiment) {
    case Experiment::figure5:
    case Experiment::multichannel:
      require(s.points >= 2, "--points must be at least 2");
      require(s.fmin > 0.0 && s.fmin <= s.fmax && s.fmax < nyquist,
              "frequency range must satisfy 0 < fmin <= fmax < fs/2");
      require(s.n_references >= 1 && s.n_sources >= 1 && s.n_errors >= 1,
              "channel counts must be positive");
      break;
    case Experiment::freq_error:
      require(s.points >= 2, "--points must be at least 2");
      require(s.f0 > 0.0 && s.f0 < nyquist, "--f0 must lie in (0, fs/2)");
      require(s.dt >= 0.0 && s.dt < 1.0 / s.fs, "--dt must lie in [0, 1/fs) so -dt is valid");
      require(1.0 / (1.0 / s.fs + s.dt) > 2.0 * s.f0,
              "--dt pushes the error clock below the Nyquist rate of --f0");
      break;
    case Experiment::chirp:
      require(s.points >= 2, "--points must be at least 2");
      require(s.bandwidth > 0.0 && s.bandwidth < nyquist, "--bandwidth must lie in (0, fs/2)");
      require(s.tl_min > 0.0 && s.tl_min <= s.tl_max, "need 0 < --tl-min <= --tl-max");
      require(std::isfinite(s.dtheta), "--dtheta must be finite");
      break;
    case Experiment::train:
    case Experiment::validate:
      require(s.f0 > 0.0 && s.f0 < nyquist, "--f0 must lie in (0, fs/2)");
      require(s.taps >= 1, "--taps must be at least 1");
      require(s.iterations >= 1, "--iterations must be at least 1");
      require(s.step >= 0.0, "--step must be non-negative");
      require(s.noise >= 0.0, "--noise must be non-negative");
      require(s.mic_distance >= 0.0, "--mic-distance must be non-negative");
      break;
  }
}

double sweep_point(double lo, double hi, int i, int n, bool log_spacing) {
  if (n <= 1 || i <= 0) return lo;
  if (i >= n - 1) return hi;
  const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
  if (log_spacing) return lo * std::pow(hi / lo, frac);
  return lo + (hi - lo) * frac;
}

Table run_figure5(const SweepSpec& spec) {
  check_spec(spec);
  Table table = new_table(spec,
                          {{"fmin", num(spec.fmin)},
                           {"fmax", num(spec.fmax)},
                           {"points", std::to_string(spec.points)},
                           {"spacing", spec.log_spacing ? "log" : "linear"},
                           {"draws", std::to_string(spec.draws)},
                           {"seed", std::to_string(spec.seed)},
                           {"mean_square_pressure", "1"}},
                          {"f0_over_fs", "residual_paper_eq26", "residual_exact",
                           "residual_monte_carlo", "mc_std_err", "n_draws", "seed"});
  const double omega_s = kTwoPi * spec.fs;
  // Every row reuses the same seed (common random numbers): the Monte Carlo
  // column is then monotone in frequency like the expectation it estimates.
  for (int i = 0; i < spec.points; ++i) {
    const double f = sweep_point(spec.fmin, spec.fmax, i, spec.points, spec.log_spacing);
    const double omega0 = kTwoPi * f;
    const MonteCarloEstimate mc = phase_error_monte_carlo(1.0, omega0, omega_s, spec.draws, spec.seed);
    table.rows.push_back({f / spec.fs, phase_error_expected_residual_paper(1.0, omega0, omega_s),
                          phase_error_expected_residual_exact(1.0, omega0, omega_s), mc.mean,
                          mc.std_error, mc.n_draws, seed_cell(spec.seed)});
  }
  return table;
}

Table run_freq_error(const SweepSpec& spec) {
  check_spec(spec);
  const FixedFilter filter = load_or_default_filter(spec);
  const double period = 1.0 / spec.fs;
  const double omega0 = kTwoPi * spec.f0;
  const double path_delay = spec.path_delay_samples * period;
  const double w1 = filter.size() > 1 ? filter[1] : 0.0;
  const ToneField tone(1.0, omega0);

  Table table = new_table(spec,
                          {{"f0", num(spec.f0)},
                           {"dt_max", num(spec.dt)},
                           {"points", std::to_string(spec.points)},
                           {"path_delay_samples", num(spec.path_delay_samples)},
                           {"filter", spec.filter_path.empty() ? "two_tap_0_1" : spec.filter_path},
                           {"n_taps", std::to_string(filter.size())},
                           {"disturbance", "filter_replay"},
                           {"reconstruction", "closed_form"}},
                          {"dt_seconds", "analytic_eq18", "full_sum_residual",
                           "simulated_residual", "reduction_db"});

  const auto n = static_cast<std::size_t>(spec.points);
  std::vector<std::vector<Cell>> rows(n);
  parallel_for(n, [&](std::size_t i) {
    // Integer numerator keeps +dt and -dt exact negatives of each other.
    const double dt = spec.dt * static_cast<double>(2 * static_cast<int>(i) - (spec.points - 1)) /
                      static_cast<double>(spec.points - 1);
    const SimScenario scenario =
        tone_scenario(tone, period, ClockModel(period, dt), filter, path_delay,
                      DisturbanceModel::filter_replay, 0.0);
    const ResidualReport report = run_scenario(scenario);
    rows[i] = {dt, freq_error_residual_power(w1, 1.0, omega0, dt),
               full_sum_freq_error_residual(filter, 1.0, omega0, period, dt, path_delay),
               report.residual_power, report.reduction_db};
  });
  table.rows = std::move(rows);
  return table;
}

Table run_chirp(const SweepSpec& spec) {
  check_spec(spec);
  const double period = 1.0 / spec.fs;
  const double control_delay = spec.control_delay_samples * period;
  const double path_delay = spec.path_delay_samples * period;
  Table table = new_table(spec,
                          {{"bandwidth", num(spec.bandwidth)},
                           {"dtheta", num(spec.dtheta)},
                           {"tl_min", num(spec.tl_min)},
                           {"tl_max", num(spec.tl_max)},
                           {"points", std::to_string(spec.points)},
                           {"spacing", spec.log_spacing ? "log" : "linear"},
                           {"control_delay_samples", num(spec.control_delay_samples)},
                           {"path_delay_samples", num(spec.path_delay_samples)},
                           {"window", "one_pulse"}},
                          {"T_L", "mean_e2_analytic", "mean_e2_simulated"});

  const auto n = static_cast<std::size_t>(spec.points);
  std::vector<std::vector<Cell>> rows(n);
  parallel_for(n, [&](std::size_t i) {
    const double pulse =
        sweep_point(spec.tl_min, spec.tl_max, static_cast<int>(i), spec.points, spec.log_spacing);
    const ChirpField chirp(1.0, spec.bandwidth, pulse);
    const SimScenario scenario =
        chirp_scenario(chirp, period, spec.dtheta, control_delay, path_delay);
    const ResidualReport report = run_scenario(scenario);
    const double analytic = chirp_mean_residual_sq(
        1.0, spec.bandwidth, pulse, scenario.measure_start, scenario.measure_duration,
        control_delay, path_delay, scenario.error_clock.initial_phase(), period);
    rows[i] = {pulse, analytic, report.residual_power};
  });
  table.rows = std::move(rows);
  return table;
}

Table run_multichannel(const SweepSpec& spec) {
  check_spec(spec);
  const double period = 1.0 / spec.fs;
  Table table = new_table(spec,
                          {{"fmin", num(spec.fmin)},
                           {"fmax", num(spec.fmax)},
                           {"points", std::to_string(spec.points)},
                           {"references", std::to_string(spec.n_references)},
                           {"sources", std::to_string(spec.n_sources)},
                           {"errors", std::to_string(spec.n_errors)},
                           {"draws", std::to_string(spec.draws)},
                           {"seed", std::to_string(spec.seed)}},
                          {"f0_over_fs", "expected_half_angle", "expected_exact",
                           "residual_monte_carlo", "mc_std_err", "max_product_form_deviation", "n_draws",
                           "seed"});

  Rng rng(derive_seed(spec.seed, 0x6d63));
  const MultichannelScenario base = random_scenario(rng, spec.n_references, spec.n_sources,
                                                    spec.n_errors, 1.0, period);
  constexpr int kPhaseGrid = 100;
  for (int i = 0; i < spec.points; ++i) {
    const double f = sweep_point(spec.fmin, spec.fmax, i, spec.points, spec.log_spacing);
    const MultichannelScenario scenario(kTwoPi * f, period, base.reference(), base.secondary(),
                                        base.reconstruction(), base.control(),
                                        base.disturbance());
    const ExpectedResidualPair expected = expected_residual_power(scenario);
    const MonteCarloEstimate mc = multichannel_monte_carlo(scenario, spec.draws, spec.seed);
    double worst = 0.0;
    const double scale = scenario.disturbance().norm();
    for (int k = 0; k < kPhaseGrid; ++k) {
      const double dtheta = kTwoPi * k / kPhaseGrid;
      const double gap =
          (residual_vector(scenario, dtheta) - residual_vector_product_form(scenario, dtheta)).norm();
      worst = std::max(worst, gap / scale);
    }
    table.rows.push_back({f / spec.fs, expected.half_angle, expected.exact, mc.mean, mc.std_error, worst,
                          mc.n_draws, seed_cell(spec.seed)});
  }
  return table;
}

TrainReport run_train(const SweepSpec& spec) {
  check_spec(spec);
  const double period = 1.0 / spec.fs;
  const double omega0 = kTwoPi * spec.f0;
  const ToneField tone(1.0, omega0);
  const SecondaryPath path(spec.path_delay_samples * period);

  TrainingConfig config;
  config.step_size = spec.step;
  config.n_taps = spec.taps;
  config.n_iterations = spec.iterations;
  config.sample_period = period;
  config.mic_distance = spec.mic_distance;
  config.measurement_noise_rms = spec.noise;
  // Offline identification long enough to be exact for this delay.
  config.secondary_path_estimate = estimate_secondary_path(
      path, period,
      static_cast<std::size_t>(std::floor(spec.path_delay_samples)) + 2 * kPathEstimateHalfWidth + 1);

  TrainReport report;
  report.training = train_fxlms(tone, path, config, spec.seed);
  const FixedFilter& trained = report.training.filter;

  const ResidualReport replay =
      run_scenario(tone_scenario(tone, period, ClockModel(period), trained, path.delay(),
                                 DisturbanceModel::plane_wave, spec.mic_distance));
  report.replay_residual_power = replay.residual_power;
  report.replay_disturbance_power = replay.disturbance_power;
  report.replay_reduction_db = replay.reduction_db;

  // Phase errors are drawn up front so the parallel replay cannot reorder them.
  Rng rng(derive_seed(spec.seed, 1));
  std::vector<double> phases(static_cast<std::size_t>(spec.draws));
  for (double& p : phases) p = kTwoPi * rng.uniform();
  std::vector<double> residuals(phases.size());
  parallel_for(phases.size(), [&](std::size_t i) {
    residuals[i] =
        run_scenario(tone_scenario(tone, period, ClockModel(period, 0.0, phases[i]), trained,
                                   path.delay(), DisturbanceModel::plane_wave, spec.mic_distance))
            .residual_power;
  });
  double mean = 0.0;
  for (double r : residuals) mean += r;
  mean /= static_cast<double>(residuals.size());
  double var = 0.0;
  for (double r : residuals) var += (r - mean) * (r - mean);
  const double n = static_cast<double>(residuals.size());
  report.phase_draws = spec.draws;
  report.phase_mean_residual = mean;
  report.phase_std_error = residuals.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  report.phase_mean_reduction_db = noise_reduction_db(replay.disturbance_power, mean);
  report.expected_exact_residual =
      phase_error_expected_residual_exact(replay.disturbance_power, omega0, kTwoPi * spec.fs);
  report.expected_exact_reduction_db =
      noise_reduction_db(replay.disturbance_power, report.expected_exact_residual);

  Table& t = report.table;
  t = new_table(spec,
                {{"f0", num(spec.f0)},
                 {"path_delay_samples", num(spec.path_delay_samples)},
                 {"taps", std::to_string(spec.taps)},
                 {"iterations", std::to_string(spec.iterations)},
                 {"step", num(spec.step)},
                 {"noise", num(spec.noise)},
                 {"mic_distance", num(spec.mic_distance)},
                 {"draws", std::to_string(spec.draws)},
                 {"seed", std::to_string(spec.seed)}},
                {"quantity", "value"});
  t.rows = {
      {std::string("training_loop_reduction_db"), report.training.loop_reduction_db},
      {std::string("replay_zero_error_reduction_db"), report.replay_reduction_db},
      {std::string("replay_disturbance_power"), report.replay_disturbance_power},
      {std::string("replay_zero_error_residual"), report.replay_residual_power},
      {std::string("phase_error_mean_residual"), report.phase_mean_residual},
      {std::string("phase_error_std_err"), report.phase_std_error},
      {std::string("phase_error_mean_reduction_db"), report.phase_mean_reduction_db},
      {std::string("expected_exact_residual"), report.expected_exact_residual},
      {std::string("expected_exact_reduction_db"), report.expected_exact_reduction_db},
      {std::string("phase_error_relative_deviation"),
       relative_deviation(report.phase_mean_residual, report.expected_exact_residual)},
  };
  return report;
}

std::vector<CheckResult> run_validate(const SweepSpec& spec) {
  check_spec(spec);
  std::vector<CheckResult> checks;
  auto add = [&checks](std::string name, double deviation, double tolerance) {
    checks.push_back({std::move(name), deviation, tolerance, deviation <= tolerance});
  };
  const double period = 1.0 / spec.fs;
  const double omega_s = kTwoPi * spec.fs;

  {
    // Perfect clocks must cancel to the 120 dB floor.
    const ToneField tone(1.0, kTwoPi * 1000.0);
    const SecondaryPath path(10.0 * period);
    const FixedFilter filter = design_cancelling_filter(tone, 1.0, period, path, 4);
    const ResidualReport r = run_scenario(
        tone_scenario(tone, period, ClockModel(period, 0.0, spec.inject_dtheta), filter,
                      path.delay(), DisturbanceModel::plane_wave, 1.0));
    add("zero_error_cancellation", r.residual_power / r.disturbance_power, 1e-12);
  }
  {
    const ToneField tone(1.0, 0.3 * omega_s);
    const SecondaryPath path(3.0 * period);
    const FixedFilter filter = design_cancelling_filter(tone, 0.5, period, path, 4);
    const ClockModel clock(period, 0.0, 1.0);
    const double closed =
        run_scenario(tone_scenario(tone, period, clock, filter, path.delay(),
                                   DisturbanceModel::plane_wave, 0.5))
            .residual_power;
    const double sinc =
        run_scenario(tone_scenario(tone, period, clock, filter, path.delay(),
                                   DisturbanceModel::plane_wave, 0.5,
                                   ReconstructionFilter::windowed_sinc(64)))
            .residual_power;
    add("mode_equivalence", relative_deviation(sinc, closed), 1e-3);
  }
  {
    const double omega0 = kTwoPi * 1000.0;
    const double dt = 0.4 * period;
    const ToneField tone(1.0, omega0);
    const FixedFilter two_tap({0.0, 0.8});
    const double sim = run_scenario(tone_scenario(tone, period, ClockModel(period, dt), two_tap,
                                                  0.0, DisturbanceModel::filter_replay, 0.0))
                           .residual_power;
    add("two_tap_closed_form", relative_deviation(sim, freq_error_residual_power(0.8, 1.0, omega0, dt)),
        1e-2);

    Rng rng(derive_seed(spec.seed, 2));
    std::vector<double> w(16);
    for (double& c : w) c = rng.uniform(-1.0, 1.0);
    const FixedFilter random_filter(w);
    const double dt_small = 0.05 * period;
    const double sim_full =
        run_scenario(tone_scenario(tone, period, ClockModel(period, dt_small), random_filter,
                                   2.0 * period, DisturbanceModel::filter_replay, 0.0))
            .residual_power;
    add("full_sum_random_filter",
        relative_deviation(sim_full, full_sum_freq_error_residual(random_filter, 1.0, omega0,
                                                                  period, dt_small, 2.0 * period)),
        1e-3);
  }
  {
    Rng rng(derive_seed(spec.seed, 3));
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int refs = 1 + static_cast<int>(rng.next_u64() % 4);
      const int srcs = 1 + static_cast<int>(rng.next_u64() % 4);
      const int errs = 1 + static_cast<int>(rng.next_u64() % 4);
      const MultichannelScenario sc =
          random_scenario(rng, refs, srcs, errs, kTwoPi * 1000.0, period);
      for (int j = 0; j < 100; ++j) {
        const double dtheta = kTwoPi * j / 100.0;
        worst = std::max(worst, (residual_vector(sc, dtheta) -
                                 residual_vector_product_form(sc, dtheta))
                                        .norm() /
                                    sc.disturbance().norm());
      }
    }
    add("product_form_reduction", worst, 1e-9);
  }
  {
    const double omega0 = 0.25 * omega_s;
    const MonteCarloEstimate mc =
        phase_error_monte_carlo(1.0, omega0, omega_s, spec.draws, spec.seed);
    const double exact = phase_error_expected_residual_exact(1.0, omega0, omega_s);
    add("monte_carlo_vs_exact",
        mc.std_error > 0.0 ? std::abs(mc.mean - exact) / mc.std_error : std::abs(mc.mean - exact),
        3.0);
  }
  {
    SweepSpec train = spec;
    train.experiment = Experiment::train;
    train.draws = 1000;
    const TrainReport r = run_train(train);
    add("replay_equivalence_db",
        std::abs(r.training.loop_reduction_db - r.replay_reduction_db), 1.0);
    add("phase_error_degradation",
        relative_deviation(r.phase_mean_residual, r.expected_exact_residual), 0.05);
  }
  {
    const ChirpField chirp(1.0, 1000.0, 1.0);
    const SimScenario sc = chirp_scenario(chirp, period, kPi, 0.0, 0.0);
    const double sim = run_scenario(sc).residual_power;
    const double analytic = chirp_mean_residual_sq(1.0, 1000.0, 1.0, sc.measure_start,
                                                   sc.measure_duration, 0.0, 0.0, kPi, period);
    add("chirp_cross_check", relative_deviation(sim, analytic), 0.02);
  }
  return checks;
}

std::string format_check(const CheckResult& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "CHECK %s dev=%.6g tol=%.6g %s", c.name.c_str(), c.deviation,
                c.tolerance, c.passed ? "PASS" : "FAIL");
  return buf;
}

}  // namespace anc
