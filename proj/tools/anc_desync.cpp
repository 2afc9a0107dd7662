#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "anc/errors.hpp"
#include "anc/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kBadArguments = 2, kIoFailure = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string experiment;
  std::optional<double> fs, fmin, fmax, f0, dt, dtheta, bandwidth, tl_min, tl_max;
  std::optional<double> path_delay, control_delay, step, noise, mic_distance, inject_dtheta;
  std::optional<int> points, refs, sources, errors;
  std::optional<std::int64_t> draws, iterations;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> taps;
  bool log_spacing = false;
  bool linear_spacing = false;
  std::string filter, out, plot, report;
};

template <class T>
void apply(const std::optional<T>& value, T& target) {
  if (value) target = *value;
}

anc::SweepSpec resolve(const Options& o, anc::Experiment experiment) {
  anc::SweepSpec spec = anc::default_spec(experiment, o.fs.value_or(16000.0));
  apply(o.fmin, spec.fmin);
  apply(o.fmax, spec.fmax);
  apply(o.points, spec.points);
  apply(o.draws, spec.draws);
  apply(o.seed, spec.seed);
  apply(o.f0, spec.f0);
  apply(o.dt, spec.dt);
  apply(o.dtheta, spec.dtheta);
  apply(o.bandwidth, spec.bandwidth);
  apply(o.tl_min, spec.tl_min);
  apply(o.tl_max, spec.tl_max);
  apply(o.path_delay, spec.path_delay_samples);
  apply(o.control_delay, spec.control_delay_samples);
  apply(o.refs, spec.n_references);
  apply(o.sources, spec.n_sources);
  apply(o.errors, spec.n_errors);
  apply(o.taps, spec.taps);
  apply(o.iterations, spec.iterations);
  apply(o.step, spec.step);
  apply(o.noise, spec.noise);
  apply(o.mic_distance, spec.mic_distance);
  apply(o.inject_dtheta, spec.inject_dtheta);
  if (o.log_spacing) spec.log_spacing = true;
  if (o.linear_spacing) spec.log_spacing = false;
  spec.filter_path = o.filter;
  return spec;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    std::cout.flush();
  } else {
    write_file(path, contents);
  }
}

void emit_table(const Options& o, const anc::Table& table, const std::string& title) {
  emit(o.out, anc::to_csv(table));
  if (!o.plot.empty()) {
    std::ostringstream svg;
    anc::write_svg_plot(svg, table, title);
    write_file(o.plot, svg.str());
  }
}

int run(const Options& o, anc::Experiment experiment) {
  const anc::SweepSpec spec = resolve(o, experiment);
  switch (experiment) {
    case anc::Experiment::figure5:
      emit_table(o, anc::run_figure5(spec), "Residual error vs f0/fs");
      return kOk;
    case anc::Experiment::freq_error:
      emit_table(o, anc::run_freq_error(spec), "Residual vs frequency error");
      return kOk;
    case anc::Experiment::chirp:
      emit_table(o, anc::run_chirp(spec), "Mean chirp residual vs pulse length");
      return kOk;
    case anc::Experiment::multichannel:
      emit_table(o, anc::run_multichannel(spec), "Multichannel residual vs f0/fs");
      return kOk;
    case anc::Experiment::train: {
      const anc::TrainReport report = anc::run_train(spec);
      if (!o.out.empty()) {
        std::ostringstream coeffs;
        anc::write_filter(coeffs, report.training.filter, spec.fs);
        write_file(o.out, coeffs.str());
      }
      emit(o.report, anc::to_csv(report.table));
      return kOk;
    }
    case anc::Experiment::validate: {
      const auto checks = anc::run_validate(spec);
      std::string text;
      int failures = 0;
      for (const auto& c : checks) {
        text += anc::format_check(c) + '\n';
        if (!c.passed) ++failures;
      }
      emit(o.out, text);
      if (failures > 0) {
        std::cerr << failures << " check(s) failed:";
        for (const auto& c : checks)
          if (!c.passed) std::cerr << ' ' << c.name;
        std::cerr << '\n';
        return kValidationFailed;
      }
      return kOk;
    }
  }
  return kBadArguments;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sampling-clock desynchronization experiments for fixed-filter active noise control.\n"
      "Experiments: figure5, freq_error, chirp, multichannel, train, validate.\n"
      "Defaults depend on the experiment; they are echoed as '# key=value' lines in each CSV.\n"
      "  figure5       fmin=0.001 fs, fmax=0.49 fs, 100 linear points, 1e6 draws\n"
      "  freq_error    f0=1000, dt=0.5/fs, 21 points over [-dt, dt], filter [0, 1]\n"
      "  chirp         B=1000, dtheta=pi, T_L from 0.1 to 100 s, 4 log points\n"
      "  multichannel  2 references, 3 sources, 2 errors, 10 points, 1e6 draws\n"
      "  train         f0=200, path delay 10 samples, 32 taps, 80000 iterations, step 0.002,\n"
      "                noise rms 1e-3, 1000 phase draws\n"
      "  validate      consistency suite; prints one CHECK line per check",
      "anc-desync"};
  Options o;
  app.add_option("experiment", o.experiment, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(
          {"figure5", "freq_error", "chirp", "multichannel", "train", "validate"}));
  app.add_option("--fs", o.fs, "Sample rate in Hz (default 16000)");
  app.add_option("--fmin", o.fmin, "Lowest swept tone frequency in Hz");
  app.add_option("--fmax", o.fmax, "Highest swept tone frequency in Hz");
  app.add_option("--points", o.points, "Number of sweep points");
  app.add_flag("--log", o.log_spacing, "Logarithmic sweep spacing");
  app.add_flag("--linear", o.linear_spacing, "Linear sweep spacing")->excludes("--log");
  app.add_option("--draws", o.draws, "Monte Carlo draws (default 1000000; train 1000)");
  app.add_option("--seed", o.seed, "Random seed (default 20230609)");
  app.add_option("--f0", o.f0, "Tone frequency in Hz (freq_error, train)");
  app.add_option("--dt", o.dt, "Largest frequency error in seconds (freq_error)");
  app.add_option("--dtheta", o.dtheta, "Initial phase error in radians (chirp)");
  app.add_option("--bandwidth", o.bandwidth, "Chirp bandwidth in Hz");
  app.add_option("--tl-min", o.tl_min, "Shortest chirp period in seconds");
  app.add_option("--tl-max", o.tl_max, "Longest chirp period in seconds");
  app.add_option("--path-delay", o.path_delay, "Secondary path delay in samples");
  app.add_option("--control-delay", o.control_delay, "Control filter delay in samples (chirp)");
  app.add_option("--references", o.refs, "Reference channels (multichannel)");
  app.add_option("--sources", o.sources, "Secondary sources (multichannel)");
  app.add_option("--errors", o.errors, "Error microphones (multichannel)");
  app.add_option("--taps", o.taps, "Control filter length (train)");
  app.add_option("--iterations", o.iterations, "Adaptation steps (train)");
  app.add_option("--step", o.step, "FxLMS step size (train)");
  app.add_option("--noise", o.noise, "Sensor noise rms during training");
  app.add_option("--mic-distance", o.mic_distance, "Reference to error microphone distance in m");
  app.add_option("--filter", o.filter, "Coefficient file to replay (freq_error)");
  app.add_option("--inject-dtheta", o.inject_dtheta,
                 "Debug: phase error forced into the zero-error check (validate)");
  app.add_option("--out", o.out,
                 "Output path; CSV for sweeps, coefficient file for train (default stdout)");
  app.add_option("--report", o.report, "Report CSV path for train (default stdout)");
  app.add_option("--plot", o.plot, "Also write an SVG line chart here");
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArguments;
  }

  const auto experiment = anc::parse_experiment(o.experiment);
  if (!experiment) {
    std::cerr << "error: unknown experiment " << o.experiment << '\n';
    return kBadArguments;
  }
  try {
    return run(o, *experiment);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const anc::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailed;
  }
}
