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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lzsm/lindblad.hpp"
#include "lzsm/model.hpp"
#include "lzsm/observables.hpp"

namespace lzsm {

enum class SweepParameter {
  probe_freq,
  epsilon0,
  flux_ratio,
  probe_amp,
  drive_amp,
  drive_freq,
  coupling_g,
};

std::string_view to_string(SweepParameter p);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);
std::string_view unit_of(SweepParameter p);

struct Axis {
  SweepParameter parameter = SweepParameter::probe_freq;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  /// Evenly spaced, endpoints included.
  std::vector<double> values() const;
  double step() const { return (stop - start) / (count - 1); }
};

enum class SweepMode { static_steady_state, driven_periodic_average };

std::string_view to_string(SweepMode m);
std::optional<SweepMode> parse_sweep_mode(std::string_view name);

struct SolverKnobs {
  int n_transient_periods = 0;  // <= 0: default_transient_periods
  int n_average_periods = 4;
  int samples_per_period = 64;
  double dt_max = 0.05;  // ns
};

struct SweepSpec {
  std::string name = "sweep";
  SystemParams base;
  FluxCalibration calibration;
  Axis axis1;
  std::optional<Axis> axis2;
  std::vector<ObservableKind> observables{ObservableKind::transmission};
  SweepMode mode = SweepMode::static_steady_state;
  SolverKnobs solver;
  double transmission_scale = 1.0;

  /// Throws SpecError.
  void validate() const;
  int count1() const { return axis1.count; }
  int count2() const { return axis2 ? axis2->count : 1; }
  /// Parameters of grid point (i, j); j is ignored for 1D sweeps.
  SystemParams point(int i, int j) const;
};

enum class PointStatus { ok, non_converged, truncation_warning };
std::string_view to_string(PointStatus s);

struct PointResult {
  std::vector<double> values;  // per requested observable; NaN on failure
  double photon_number = 0.0;
  PointStatus status = PointStatus::ok;
  std::string message;
};

/// Evaluate one parameter point the way run_sweep does.
PointResult evaluate_point(const SystemParams& p, SweepMode mode,
                           const std::vector<ObservableKind>& observables,
                           const SolverKnobs& solver, double transmission_scale = 1.0);

struct GridResult {
  std::string name;
  std::string axis1_name, axis1_unit;
  std::string axis2_name, axis2_unit;  // empty for 1D
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;  // {} for 1D
  std::vector<ObservableKind> observables;
  /// data[k][i * count2 + j] for observable k.
  std::vector<std::vector<double>> data;
  std::vector<double> photon_number;
  std::vector<PointStatus> status;
  std::vector<std::string> messages;
  nlohmann::json provenance;

  std::size_t count1() const { return axis1_values.size(); }
  std::size_t count2() const { return axis2_values.empty() ? 1 : axis2_values.size(); }
  double value(std::size_t obs, std::size_t i, std::size_t j = 0) const {
    return data[obs][i * count2() + j];
  }
  /// Index of `kind` in `observables`; throws SpecError when absent.
  std::size_t observable_index(ObservableKind kind) const;
};

struct RunOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  /// Called with (done, total); done is strictly increasing. Serialized.
  std::function<void(std::size_t, std::size_t)> progress;
};

nlohmann::json to_json(const SweepSpec& spec);

GridResult run_sweep(const SweepSpec& spec, const RunOptions& options = {});

/// One run per g = multiplier * spec.base.coupling_g, in input order.
std::vector<GridResult> coupling_sweep(const SweepSpec& spec,
                                       const std::vector<double>& g_multipliers,
                                       const RunOptions& options = {});

/// Coupling-to-resonator ratio from which the RWA is flagged as doubtful.
inline constexpr double kUltrastrongRatio = 0.1;

}  // namespace lzsm
