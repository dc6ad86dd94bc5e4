// Copyright 2026 The lzsm Authors
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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lzsm/config.hpp"
#include "lzsm/csv_io.hpp"
#include "lzsm/sweep.hpp"
#include "lzsm/validation.hpp"

namespace {

using namespace lzsm;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string output_dir;
  unsigned workers = 0;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "run configuration file");
  if (config_required) c->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "override a key, section.key=value (repeatable)");
  cmd->add_option("--output-dir", o.output_dir, "directory for CSV and metadata files");
  cmd->add_option("--workers", o.workers, "worker threads (default: all cores)");
  cmd->add_flag("--verbose", o.verbose, "debug logging");
}

RunConfig load(const CommonOptions& o) {
  ConfigDocument doc = o.config.empty() ? ConfigDocument::parse("", "<defaults>")
                                        : ConfigDocument::load(o.config);
  for (const auto& s : o.overrides) doc.apply_override(s);
  RunConfig rc = build_run_config(doc);
  if (!o.output_dir.empty()) rc.output_dir = o.output_dir;
  return rc;
}

// Shape rules per figure class.
struct Shape {
  const char* command;
  SweepMode mode;
  std::vector<std::set<SweepParameter>> axes;  // each axis must come from one set, in any order
  bool second_axis_optional = false;
};

void check_shape(RunConfig& rc, const Shape& shape) {
  SweepSpec& s = rc.sweep;
  const std::string cmd = shape.command;
  if (!rc.has_axis1) throw ConfigError(cmd + ": [sweep] axis1 is required");
  if (rc.has_mode && s.mode != shape.mode) {
    throw ConfigError(cmd + ": sweep.mode must be " + std::string(to_string(shape.mode)));
  }
  s.mode = shape.mode;
  std::vector<SweepParameter> given{s.axis1.parameter};
  if (s.axis2) given.push_back(s.axis2->parameter);
  const std::size_t wanted = shape.axes.size();
  if (given.size() > wanted || (given.size() < wanted && !shape.second_axis_optional)) {
    throw ConfigError(cmd + ": expected " + std::to_string(wanted) + " sweep axes");
  }
  auto fits = [&](const std::vector<std::size_t>& order) {
    for (std::size_t k = 0; k < given.size(); ++k)
      if (!shape.axes[order[k]].count(given[k])) return false;
    return true;
  };
  const bool ok = given.size() == 1 ? fits({0}) || (wanted > 1 && fits({1}))
                                    : fits({0, 1}) || fits({1, 0});
  if (!ok) {
    std::string allowed;
    for (const auto& set : shape.axes) {
      std::string alt;
      for (auto p : set) alt += (alt.empty() ? "" : "|") + std::string(to_string(p));
      allowed += (allowed.empty() ? "" : " x ") + alt;
    }
    throw ConfigError(cmd + ": sweep axes must be " + allowed);
  }
}

void report_progress(std::size_t done, std::size_t total) {
  const std::size_t step = std::max<std::size_t>(1, total / 10);
  if (done == total || done % step == 0) spdlog::info("progress {}/{}", done, total);
}

void write_outputs(const RunConfig& rc, const GridResult& grid) {
  const auto files = write_grid_csv(grid, rc.output_dir);
  for (const auto& f : files.csv) spdlog::info("wrote {}", f.string());
  spdlog::info("wrote {}", files.metadata.string());
}

int exit_status(const GridResult& grid) {
  const auto bad = std::count(grid.status.begin(), grid.status.end(), PointStatus::non_converged);
  if (bad == 0) return kExitOk;
  spdlog::error("{}: {} points did not converge (empty cells, listed in the metadata)", grid.name,
                bad);
  return kExitSolver;
}

void write_effective_config(const RunConfig& rc) {
  const auto path = rc.output_dir / (rc.sweep.name + ".config.ini");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << serialize(rc);
  if (!out) throw IoError("write failed for " + path.string());
}

int run_grid(const CommonOptions& o, const Shape& shape) {
  RunConfig rc = load(o);
  check_shape(rc, shape);
  rc.sweep.validate();
  RunOptions opts;
  opts.workers = o.workers;
  opts.progress = report_progress;
  const auto grid = run_sweep(rc.sweep, opts);
  write_outputs(rc, grid);
  write_effective_config(rc);
  return exit_status(grid);
}

int run_coupling(const CommonOptions& o, const Shape& shape) {
  RunConfig rc = load(o);
  check_shape(rc, shape);
  rc.sweep.validate();
  if (rc.g_multipliers.empty()) rc.g_multipliers = {0.25, 1.0, 2.0, 8.0};
  RunOptions opts;
  opts.workers = o.workers;
  opts.progress = report_progress;
  const auto grids = coupling_sweep(rc.sweep, rc.g_multipliers, opts);
  int status = kExitOk;
  for (const auto& g : grids) {
    write_outputs(rc, g);
    status = std::max(status, exit_status(g));
  }
  write_effective_config(rc);
  return status;
}

int run_point(const CommonOptions& o) {
  RunConfig rc = load(o);
  const SystemParams& p = rc.sweep.base;
  SweepMode mode = p.drive_amp > 0.0 ? SweepMode::driven_periodic_average
                                     : SweepMode::static_steady_state;
  if (rc.has_mode) mode = rc.sweep.mode;
  if (mode == SweepMode::static_steady_state && p.drive_amp > 0.0) {
    throw ConfigError("point: static_steady_state requires drive_amp = 0");
  }
  const std::vector<ObservableKind> kinds{ObservableKind::transmission,
                                          ObservableKind::qubit_population,
                                          ObservableKind::photon_number};
  const auto r = evaluate_point(p, mode, kinds, rc.sweep.solver, rc.sweep.transmission_scale);
  std::printf("mode = %s\n", std::string(to_string(mode)).c_str());
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    std::printf("%s = %s\n", std::string(to_string(kinds[k])).c_str(),
                format_cell(r.values[k]).c_str());
  }
  std::printf("status = %s\n", std::string(to_string(r.status)).c_str());
  if (!r.message.empty()) spdlog::warn("{}", r.message);
  return r.status == PointStatus::non_converged ? kExitSolver : kExitOk;
}

int run_validate() {
  const auto checks = run_oracle_suite();
  bool all = true;
  std::printf("%-52s %12s %10s  %s\n", "check", "error", "tolerance", "result");
  for (const auto& c : checks) {
    std::printf("%-52s %12.3e %10.1e  %s%s%s\n", c.name.c_str(), c.error, c.tolerance,
                c.passed ? "PASS" : "FAIL", c.detail.empty() ? "" : "  ", c.detail.c_str());
    all = all && c.passed;
  }
  std::printf("%s\n", all ? "all oracle checks passed" : "oracle checks FAILED");
  return all ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("lzsm");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S] [%l] %v");

  CLI::App app{"Lindblad simulator for a driven flux qubit coupled to a resonator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LZSM_VERSION);

  const std::set<SweepParameter> bias{SweepParameter::flux_ratio, SweepParameter::epsilon0};
  const std::set<SweepParameter> freq{SweepParameter::probe_freq};
  const std::set<SweepParameter> amp{SweepParameter::drive_amp};
  const std::set<SweepParameter> power{SweepParameter::probe_amp};

  struct Entry {
    std::string name;
    std::string help;
    std::optional<Shape> shape;
    bool coupling = false;
  };
  const std::vector<Entry> entries = {
      {"point", "evaluate observables at one parameter point", std::nullopt},
      {"spectroscopy", "steady-state transmission versus probe frequency (optionally bias)",
       Shape{"spectroscopy", SweepMode::static_steady_state, {freq, bias}, true}},
      {"power-sweep", "steady-state transmission versus probe frequency and amplitude",
       Shape{"power-sweep", SweepMode::static_steady_state, {freq, power}}},
      {"interferogram-flux", "driven interferogram over bias and drive amplitude",
       Shape{"interferogram-flux", SweepMode::driven_periodic_average, {bias, amp}}},
      {"interferogram-freq", "driven interferogram over probe frequency and drive amplitude",
       Shape{"interferogram-freq", SweepMode::driven_periodic_average, {freq, amp}}},
      {"coupling-study", "bias x drive-amplitude interferograms for several couplings",
       Shape{"coupling-study", SweepMode::driven_periodic_average, {bias, amp}}, true},
      {"validate", "run the analytic oracle suite", std::nullopt},
  };

  std::vector<CommonOptions> options(entries.size());
  std::vector<CLI::App*> commands;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    auto* cmd = app.add_subcommand(entries[k].name, entries[k].help);
    if (entries[k].name != "validate") add_common(cmd, options[k], entries[k].shape.has_value());
    else cmd->add_flag("--verbose", options[k].verbose, "debug logging");
    commands.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (!commands[k]->parsed()) continue;
      const auto& o = options[k];
      spdlog::set_level(o.verbose ? spdlog::level::debug : spdlog::level::info);
      const auto& e = entries[k];
      if (e.name == "validate") return run_validate();
      if (e.name == "point") return run_point(o);
      if (e.coupling) return run_coupling(o, *e.shape);
      return run_grid(o, *e.shape);
    }
  } catch (const SpecError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitSolver;
  }
  return kExitOk;
}
