#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anc/csv_table.hpp"
#include "anc/fxlms.hpp"

namespace anc {

enum class Experiment { figure5, freq_error, chirp, multichannel, train, validate };

std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment experiment);

/// Everything a sweep needs. Frequencies are in hertz; delays given in
/// samples are multiplied by 1/fs.
struct SweepSpec {
  Experiment experiment = Experiment::figure5;
  double fs = 16000.0;
  double fmin = 16.0;
  double fmax = 7840.0;
  int points = 100;
  bool log_spacing = false;
  std::int64_t draws = 1'000'000;
  std::uint64_t seed = 20230609;

  /// Tone frequency for freq_error and train.
  double f0 = 1000.0;
  /// freq_error sweeps dt over [-dt, dt].
  double dt = 0.5 / 16000.0;
  /// Phase error used by the chirp experiment.
  double dtheta = 3.14159265358979323846;
  double bandwidth = 1000.0;
  double tl_min = 0.1;
  double tl_max = 100.0;
  double path_delay_samples = 0.0;
  double control_delay_samples = 0.0;

  int n_references = 2;
  int n_sources = 3;
  int n_errors = 2;

  std::size_t taps = 32;
  std::int64_t iterations = 80000;
  double step = 0.002;
  double noise = 1e-3;
  double mic_distance = 1.0;

  /// freq_error: coefficient file to replay instead of the two-tap [0, 1].
  std::string filter_path;
  /// validate: phase error forced into the zero-error check (debug).
  double inject_dtheta = 0.0;
};

/// Experiment-specific defaults at the given sample rate.
SweepSpec default_spec(Experiment experiment, double fs = 16000.0);

/// Throws DomainError describing the first invalid parameter.
void check_spec(const SweepSpec& spec);

/// i-th of n points between lo and hi (inclusive), linear or logarithmic.
double sweep_point(double lo, double hi, int i, int n, bool log_spacing);

Table run_figure5(const SweepSpec& spec);
Table run_freq_error(const SweepSpec& spec);
Table run_chirp(const SweepSpec& spec);
Table run_multichannel(const SweepSpec& spec);

struct TrainReport {
  TrainingResult training;
  double replay_residual_power = 0.0;
  double replay_disturbance_power = 0.0;
  double replay_reduction_db = 0.0;
  /// Mean residual over uniformly drawn phase errors, with its standard error.
  double phase_mean_residual = 0.0;
  double phase_std_error = 0.0;
  double phase_mean_reduction_db = 0.0;
  double expected_exact_residual = 0.0;
  double expected_exact_reduction_db = 0.0;
  std::int64_t phase_draws = 0;
  Table table;
};

/// Train on the reference clock, freeze, and replay through the time-domain
/// simulator with and without a random initial phase error.
TrainReport run_train(const SweepSpec& spec);

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Consistency suite; every check compares two independent routes.
std::vector<CheckResult> run_validate(const SweepSpec& spec);

/// "CHECK <name> dev=<value> tol=<value> PASS|FAIL"
std::string format_check(const CheckResult& check);

}  // namespace anc
