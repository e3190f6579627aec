// Copyright 2026 The qfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfilter/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <vector>

#include "qfilter/checks.hpp"
#include "qfilter/config.hpp"
#include "qfilter/io.hpp"
#include "qfilter/ito.hpp"
#include "qfilter/numfmt.hpp"
#include "qfilter/simulate.hpp"
#include "qfilter/svg.hpp"

namespace qfilter {

namespace {

struct OutputFile {
  std::string name;
  std::string content;
};

void write_all(const std::string& out_dir, const std::vector<OutputFile>& files) {
  std::filesystem::create_directories(out_dir);
  for (const OutputFile& f : files) {
    write_text_file((std::filesystem::path(out_dir) / f.name).string(),
                    f.content);
  }
}

/// Loads and parses the config, printing every accumulated error.
std::optional<ScenarioConfig> load_config(const CliOptions& options) {
  if (options.config_path.empty()) {
    std::cerr << "error: --config is required for this command\n";
    return std::nullopt;
  }
  try {
    return parse_config(read_text_file(options.config_path));
  } catch (const ConfigError& e) {
    for (const std::string& msg : e.errors()) {
      std::cerr << "config error: " << msg << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return std::nullopt;
}

SimulationSpec to_spec(const ScenarioConfig& cfg, const CliOptions& options) {
  SimulationSpec spec;
  spec.model = cfg.model;
  spec.grid = cfg.grid;
  spec.n_traj = cfg.n_traj;
  spec.master_seed = options.seed.value_or(cfg.master_seed);
  spec.observables = cfg.observables;
  return spec;
}

void echo_lines(std::ostringstream& os, const ScenarioConfig& cfg) {
  for (const auto& [key, value] : cfg.echo) {
    os << "config." << key << " = " << value << '\n';
  }
}

std::string record_file_name(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return "record_" + digits + ".csv";
}

std::string plot_series_csv(const SimulationSpec& spec,
                            const EnsembleResult& ens,
                            const StateTrajectory& master) {
  std::ostringstream os;
  os << "t,obs_name,mean,stderr,master\n";
  for (std::size_t i = 0; i < spec.observables.size(); ++i) {
    const NamedObservable& obs = spec.observables[i];
    for (std::size_t k = 0; k <= spec.grid.n_steps; ++k) {
      os << format_double(spec.grid.time_at(k)) << ',' << obs.name << ','
         << format_double(ens.observables[i].mean[k]) << ','
         << format_double(ens.observables[i].std_error[k]) << ','
         << format_double(expectation(master.states[k], obs.op).real())
         << '\n';
    }
  }
  return os.str();
}

std::string trajectory_expectations_csv(
    const SimulationSpec& spec, const std::vector<TrajectoryResult>& subset) {
  std::ostringstream os;
  os << "t,traj,obs_name,value\n";
  for (const TrajectoryResult& t : subset) {
    for (const NamedObservable& obs : spec.observables) {
      for (std::size_t k = 0; k < t.filter.states.size(); ++k) {
        os << format_double(spec.grid.time_at(k)) << ',' << t.index << ','
           << obs.name << ','
           << format_double(expectation(t.filter.states[k], obs.op).real())
           << '\n';
      }
    }
  }
  return os.str();
}

std::string make_plot(const SimulationSpec& spec, const EnsembleResult& ens,
                      const StateTrajectory& master, std::size_t i) {
  const NamedObservable& obs = spec.observables[i];
  PlotSpec plot;
  plot.title = obs.name + " vs time";
  plot.x_label = "t";
  plot.y_label = "<" + obs.name + ">";
  std::vector<double> ts(spec.grid.n_steps + 1);
  std::vector<double> master_vals(spec.grid.n_steps + 1);
  for (std::size_t k = 0; k <= spec.grid.n_steps; ++k) {
    ts[k] = spec.grid.time_at(k);
    master_vals[k] = expectation(master.states[k], obs.op).real();
  }
  PlotSeries mean_series;
  mean_series.label = "ensemble mean +- stderr";
  mean_series.x = ts;
  mean_series.y = ens.observables[i].mean;
  mean_series.band = ens.observables[i].std_error;
  mean_series.color = "#1f77b4";
  PlotSeries master_series;
  master_series.label = "master equation";
  master_series.x = std::move(ts);
  master_series.y = std::move(master_vals);
  master_series.color = "#d62728";
  plot.series = {std::move(mean_series), std::move(master_series)};
  return render_line_plot(plot);
}

}  // namespace

int cmd_simulate(const CliOptions& options) {
  const auto cfg = load_config(options);
  if (!cfg) return kExitUsage;
  SimulationSpec spec = to_spec(*cfg, options);
  try {
    validate_spec(spec);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<OutputFile> files;
  try {
    const EnsembleResult ens = simulate_ensemble(spec, ExecMode::kParallel);
    const StateTrajectory master =
        integrate_master(spec.model, spec.grid, OdeMethod::kRk4);

    const std::size_t n_records = std::min(cfg->records_limit, spec.n_traj);
    std::vector<TrajectoryResult> subset;
    subset.reserve(n_records);
    for (std::size_t i = 0; i < n_records; ++i) {
      subset.push_back(simulate_trajectory(spec, i));
    }
    for (const TrajectoryResult& t : subset) {
      if (!t.diverged) {
        files.push_back({record_file_name(t.index), emit_record(t.record)});
      }
    }
    files.push_back(
        {"trajectory_expectations.csv", trajectory_expectations_csv(spec, subset)});
    files.push_back({"ensemble.csv", plot_series_csv(spec, ens, master)});

    std::ostringstream summary;
    summary << "command = simulate\n";
    echo_lines(summary, *cfg);
    summary << "master_seed = " << spec.master_seed << '\n';
    summary << "n_traj = " << spec.n_traj << '\n';
    summary << "diverged = " << ens.n_diverged << '\n';
    summary << "records_written = " << n_records << '\n';
    for (std::size_t i = 0; i < spec.observables.size(); ++i) {
      const std::string& name = spec.observables[i].name;
      summary << "final." << name << ".mean = "
              << format_double(ens.observables[i].mean.back()) << '\n';
      summary << "final." << name << ".stderr = "
              << format_double(ens.observables[i].std_error.back()) << '\n';
    }
    files.push_back({"summary.kv", summary.str()});

    if (cfg->plots) {
      for (std::size_t i = 0; i < spec.observables.size(); ++i) {
        files.push_back({"plot_" + spec.observables[i].name + ".svg",
                         make_plot(spec, ens, master, i)});
      }
    }
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kExitDiverged;
  }

  try {
    write_all(options.out_dir, files);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!options.quiet) {
    std::cout << "simulate: wrote " << files.size() << " files to "
              << options.out_dir << '\n';
  }
  return kExitOk;
}

int cmd_filter(const CliOptions& options) {
  const auto cfg = load_config(options);
  if (!cfg) return kExitUsage;
  if (options.record_path.empty()) {
    std::cerr << "error: --record is required for the filter command\n";
    return kExitUsage;
  }
  ObservationRecord record;
  try {
    record = parse_record(read_text_file(options.record_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  // The record must match the configured scenario exactly.
  std::vector<std::string> mismatches;
  if (record.detection != cfg->model.detection) {
    mismatches.push_back("detection differs");
  }
  if (record.grid.t0 != cfg->grid.t0 || record.grid.dt != cfg->grid.dt ||
      record.grid.n_steps != cfg->grid.n_steps) {
    mismatches.push_back(
        "grid differs: record (t0 = " + format_double(record.grid.t0) +
        ", dt = " + format_double(record.grid.dt) + ", n_steps = " +
        std::to_string(record.grid.n_steps) + ") vs config (t0 = " +
        format_double(cfg->grid.t0) + ", dt = " + format_double(cfg->grid.dt) +
        ", n_steps = " + std::to_string(cfg->grid.n_steps) + ")");
  }
  if (!mismatches.empty()) {
    for (const std::string& m : mismatches) {
      std::cerr << "record/config mismatch: " << m << '\n';
    }
    return kExitUsage;
  }

  const bool homodyne = record.detection == Detection::kHomodyne;
  std::vector<OutputFile> files;
  try {
    const FilterTrajectory normalized =
        run_filter(cfg->model, record, FilterKind::kNormalized);
    FilterTrajectory linear;
    std::vector<DensityMatrix> linear_normalized;
    if (homodyne) {
      linear = run_filter(cfg->model, record, FilterKind::kLinear);
      linear_normalized.reserve(linear.linear_states.size());
      for (const Operator& sigma : linear.linear_states) {
        linear_normalized.push_back(normalize_linear(sigma));
      }
    }

    std::ostringstream expectations;
    expectations << (homodyne ? "t,obs_name,normalized,linear\n"
                              : "t,obs_name,normalized\n");
    for (const NamedObservable& obs : cfg->observables) {
      for (std::size_t k = 0; k < normalized.states.size(); ++k) {
        expectations << format_double(cfg->grid.time_at(k)) << ',' << obs.name
                     << ','
                     << format_double(
                            expectation(normalized.states[k], obs.op).real());
        if (homodyne) {
          expectations << ','
                       << format_double(
                              expectation(linear_normalized[k], obs.op).real());
        }
        expectations << '\n';
      }
    }
    files.push_back({"filter_expectations.csv", expectations.str()});

    double max_distance = 0.0;
    if (homodyne) {
      std::ostringstream distance;
      distance << "t,trace_distance\n";
      for (std::size_t k = 0; k < normalized.states.size(); ++k) {
        const double td = trace_distance(normalized.states[k].mat(),
                                         linear_normalized[k].mat());
        max_distance = std::max(max_distance, td);
        distance << format_double(cfg->grid.time_at(k)) << ','
                 << format_double(td) << '\n';
      }
      files.push_back({"filter_distance.csv", distance.str()});
    }

    std::ostringstream summary;
    summary << "command = filter\n";
    echo_lines(summary, *cfg);
    summary << "record = " << options.record_path << '\n';
    if (record.seed_provenance) {
      summary << "record.master_seed = " << record.seed_provenance->master_seed
              << '\n';
      summary << "record.traj_index = "
              << record.seed_provenance->trajectory_index << '\n';
    }
    if (homodyne) {
      summary << "max_trace_distance = " << format_double(max_distance) << '\n';
    }
    for (const NamedObservable& obs : cfg->observables) {
      summary << "final." << obs.name << ".normalized = "
              << format_double(
                     expectation(normalized.states.back(), obs.op).real())
              << '\n';
      if (homodyne) {
        summary << "final." << obs.name << ".linear = "
                << format_double(
                       expectation(linear_normalized.back(), obs.op).real())
                << '\n';
      }
    }
    files.push_back({"summary.kv", summary.str()});
  } catch (const DivergenceError& e) {
    std::cerr << "divergence at step " << e.step << ": " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    write_all(options.out_dir, files);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!options.quiet) {
    std::cout << "filter: wrote " << files.size() << " files to "
              << options.out_dir << '\n';
  }
  return kExitOk;
}

int cmd_check(const CliOptions& options) {
  CheckOptions check_options;
  std::vector<std::pair<std::string, std::string>> echo;
  if (!options.config_path.empty()) {
    const auto cfg = load_config(options);
    if (!cfg) return kExitUsage;
    // Check scenarios are pinned to the built-in presets; a config only
    // contributes its master_seed (and the echo for the summary).
    check_options.master_seed = cfg->master_seed;
    echo = cfg->echo;
  }
  if (options.seed) check_options.master_seed = *options.seed;

  const auto start = std::chrono::steady_clock::now();
  RunSummary summary = run_all_checks(check_options);
  summary.config_echo = std::move(echo);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::vector<OutputFile> files;
  files.push_back({"check_summary.kv", render_summary_file(summary)});
  try {
    write_all(options.out_dir, files);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!options.quiet) {
    std::cout << render_check_table(summary);
    std::cout << "wall time: " << std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::duration<double>(summary.wall_seconds))
                     .count()
              << " ms (not part of the summary file)\n";
  }
  return all_checks_passed(summary) ? kExitOk : kExitCheckFailed;
}

int cmd_symbolic(const CliOptions& options) {
  const auto cfg = load_config(options);
  if (!cfg) return kExitUsage;
  const SystemModel& m = cfg->model;

  std::ostringstream os;
  const ItoExpression du = hp_differential(m);
  if (du.is_zero(0.0)) {
    os << "dU = 0\n";
  } else {
    os << "dU = (" << to_string(du) << ") U\n";
  }
  os << "d(U\xE2\x80\xA0U) = " << to_string(check_unitarity(m)) << '\n';
  for (const NamedObservable& obs : cfg->observables) {
    os << "dj(" << obs.name << ") = " << to_string(flow_differential(m, obs.op))
       << '\n';
  }
  std::cout << os.str();
  return kExitOk;
}

}  // namespace qfilter
