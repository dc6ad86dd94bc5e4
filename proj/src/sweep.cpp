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

#include "lzsm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#ifndef LZSM_VERSION
#define LZSM_VERSION "unknown"
#endif

namespace lzsm {

namespace {

constexpr SweepParameter kAllParameters[] = {
    SweepParameter::probe_freq, SweepParameter::epsilon0,  SweepParameter::flux_ratio,
    SweepParameter::probe_amp,  SweepParameter::drive_amp, SweepParameter::drive_freq,
    SweepParameter::coupling_g,
};

void apply(SystemParams& p, SweepParameter which, double value, const FluxCalibration& cal) {
  switch (which) {
    case SweepParameter::probe_freq:
      p.probe_freq = value;
      break;
    case SweepParameter::epsilon0:
      p.epsilon0 = value;
      break;
    case SweepParameter::flux_ratio:
      p.epsilon0 = epsilon_from_flux(value, cal);
      break;
    case SweepParameter::probe_amp:
      p.probe_amp = value;
      break;
    case SweepParameter::drive_amp:
      p.drive_amp = value;
      break;
    case SweepParameter::drive_freq:
      p.drive_freq = value;
      break;
    case SweepParameter::coupling_g:
      p.coupling_g = value;
      break;
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json axis_json(const Axis& a) {
  return {{"parameter", std::string(to_string(a.parameter))},
          {"start", a.start},
          {"stop", a.stop},
          {"count", a.count}};
}

}  // namespace

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::probe_freq:
      return "probe_freq";
    case SweepParameter::epsilon0:
      return "epsilon0";
    case SweepParameter::flux_ratio:
      return "flux_ratio";
    case SweepParameter::probe_amp:
      return "probe_amp";
    case SweepParameter::drive_amp:
      return "drive_amp";
    case SweepParameter::drive_freq:
      return "drive_freq";
    case SweepParameter::coupling_g:
      return "coupling_g";
  }
  return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
  for (auto p : kAllParameters)
    if (name == to_string(p)) return p;
  return std::nullopt;
}

std::string_view unit_of(SweepParameter p) {
  return p == SweepParameter::flux_ratio ? "Phi_DC/Phi0" : "GHz";
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    v[k] = k == count - 1 ? stop : start + (stop - start) * static_cast<double>(k) / (count - 1);
  }
  return v;
}

std::string_view to_string(SweepMode m) {
  return m == SweepMode::static_steady_state ? "static_steady_state" : "driven_periodic_average";
}

std::optional<SweepMode> parse_sweep_mode(std::string_view name) {
  if (name == "static_steady_state") return SweepMode::static_steady_state;
  if (name == "driven_periodic_average") return SweepMode::driven_periodic_average;
  return std::nullopt;
}

std::string_view to_string(PointStatus s) {
  switch (s) {
    case PointStatus::ok:
      return "ok";
    case PointStatus::non_converged:
      return "non_converged";
    case PointStatus::truncation_warning:
      return "truncation_warning";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  base.validate();
  calibration.validate();
  auto check_axis = [](const Axis& a, const char* label) {
    if (a.count < 2) throw SpecError(std::string(label) + ": count must be >= 2");
    if (!(a.start != a.stop) || !std::isfinite(a.start) || !std::isfinite(a.stop)) {
      throw SpecError(std::string(label) + ": start and stop must be finite and distinct");
    }
  };
  check_axis(axis1, "axis1");
  if (axis2) {
    check_axis(*axis2, "axis2");
    if (axis2->parameter == axis1.parameter) throw SpecError("axis2 repeats the axis1 parameter");
    const bool both_bias = (axis1.parameter == SweepParameter::flux_ratio &&
                            axis2->parameter == SweepParameter::epsilon0) ||
                           (axis1.parameter == SweepParameter::epsilon0 &&
                            axis2->parameter == SweepParameter::flux_ratio);
    if (both_bias) throw SpecError("flux_ratio and epsilon0 cannot both be swept");
  }
  if (observables.empty()) throw SpecError("at least one observable is required");
  if (transmission_scale <= 0.0) throw SpecError("transmission_scale must be > 0");
  if (solver.n_average_periods < 1) throw SpecError("n_average_periods must be >= 1");
  if (solver.samples_per_period < 64) throw SpecError("samples_per_period must be >= 64");
  if (!(solver.dt_max > 0.0)) throw SpecError("dt_max must be > 0");

  // Every grid point has to be a valid parameter set.
  for (int i : {0, count1() - 1})
    for (int j : {0, count2() - 1}) point(i, j).validate();

  if (mode == SweepMode::static_steady_state) {
    const bool drive_swept = axis1.parameter == SweepParameter::drive_amp ||
                             (axis2 && axis2->parameter == SweepParameter::drive_amp);
    if (base.drive_amp != 0.0 || drive_swept) {
      throw SpecError("static_steady_state sweeps require drive_amp = 0 at every point");
    }
  } else {
    for (int i : {0, count1() - 1})
      for (int j : {0, count2() - 1})
        if (!(point(i, j).drive_freq > 0.0)) {
          throw SpecError("driven_periodic_average sweeps require drive_freq > 0");
        }
  }
}

SystemParams SweepSpec::point(int i, int j) const {
  SystemParams p = base;
  const auto v1 = axis1.values();
  apply(p, axis1.parameter, v1.at(static_cast<std::size_t>(i)), calibration);
  if (axis2) {
    const auto v2 = axis2->values();
    apply(p, axis2->parameter, v2.at(static_cast<std::size_t>(j)), calibration);
  }
  return p;
}

std::size_t GridResult::observable_index(ObservableKind kind) const {
  for (std::size_t k = 0; k < observables.size(); ++k)
    if (observables[k] == kind) return k;
  throw SpecError("grid does not contain observable " + std::string(to_string(kind)));
}

PointResult evaluate_point(const SystemParams& p, SweepMode mode,
                           const std::vector<ObservableKind>& observables,
                           const SolverKnobs& solver, double transmission_scale) {
  PointResult out;
  out.values.assign(observables.size(), std::numeric_limits<double>::quiet_NaN());
  try {
    if (mode == SweepMode::static_steady_state) {
      const auto rho = steady_state(p);
      for (std::size_t k = 0; k < observables.size(); ++k)
        out.values[k] = evaluate(observables[k], rho, transmission_scale);
      out.photon_number = photon_number(rho);
    } else {
      std::vector<StateFunctional> fns;
      for (auto kind : observables) {
        fns.emplace_back([kind, transmission_scale](const DensityMatrix& rho) {
          return evaluate(kind, rho, transmission_scale);
        });
      }
      fns.emplace_back([](const DensityMatrix& rho) { return photon_number(rho); });
      PeriodicSettings settings;
      settings.n_transient_periods = solver.n_transient_periods;
      settings.n_average_periods = solver.n_average_periods;
      settings.samples_per_period = solver.samples_per_period;
      settings.propagation.dt_max = solver.dt_max;
      const auto res = periodic_average(p, settings, fns);
      std::copy(res.values.begin(), res.values.end() - 1, out.values.begin());
      out.photon_number = res.values.back();
      if (!res.converged) {
        out.status = PointStatus::non_converged;
        out.message = "last two drive periods differ by " + std::to_string(res.last_period_change);
      }
    }
  } catch (const Error& e) {
    out.status = PointStatus::non_converged;
    out.message = e.what();
    std::fill(out.values.begin(), out.values.end(), std::numeric_limits<double>::quiet_NaN());
    out.photon_number = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  if (out.status == PointStatus::ok && truncation_suspect(out.photon_number, p.fock_levels)) {
    out.status = PointStatus::truncation_warning;
    out.message = "mean photon number " + std::to_string(out.photon_number) +
                  " is close to the Fock cutoff";
  }
  return out;
}

nlohmann::json to_json(const SweepSpec& spec) {
  const auto& b = spec.base;
  nlohmann::json j;
  j["name"] = spec.name;
  j["system"] = {{"delta", b.delta},
                 {"epsilon0", b.epsilon0},
                 {"resonator_freq", b.resonator_freq},
                 {"coupling_g", b.coupling_g},
                 {"probe_amp", b.probe_amp},
                 {"probe_freq", b.probe_freq},
                 {"drive_amp", b.drive_amp},
                 {"drive_freq", b.drive_freq},
                 {"gamma1", b.gamma1},
                 {"gamma2", b.gamma2},
                 {"kappa", b.kappa},
                 {"fock_levels", b.fock_levels},
                 {"geometric_term", b.geometric_term}};
  j["calibration"] = {{"lever_ghz_per_flux", spec.calibration.lever_ghz_per_flux},
                      {"drive_ghz_per_vrms", spec.calibration.drive_ghz_per_vrms}};
  j["axis1"] = axis_json(spec.axis1);
  j["axis2"] = spec.axis2 ? axis_json(*spec.axis2) : nlohmann::json(nullptr);
  auto& obs = j["observables"] = nlohmann::json::array();
  for (auto k : spec.observables) obs.push_back(std::string(to_string(k)));
  j["mode"] = std::string(to_string(spec.mode));
  j["solver"] = {{"n_transient_periods", spec.solver.n_transient_periods},
                 {"n_average_periods", spec.solver.n_average_periods},
                 {"samples_per_period", spec.solver.samples_per_period},
                 {"dt_max", spec.solver.dt_max}};
  j["transmission_scale"] = spec.transmission_scale;
  return j;
}

GridResult run_sweep(const SweepSpec& spec, const RunOptions& options) {
  spec.validate();
  GridResult out;
  out.name = spec.name;
  out.axis1_name = to_string(spec.axis1.parameter);
  out.axis1_unit = unit_of(spec.axis1.parameter);
  out.axis1_values = spec.axis1.values();
  if (spec.axis2) {
    out.axis2_name = to_string(spec.axis2->parameter);
    out.axis2_unit = unit_of(spec.axis2->parameter);
    out.axis2_values = spec.axis2->values();
  }
  out.observables = spec.observables;

  const std::size_t n1 = static_cast<std::size_t>(spec.count1());
  const std::size_t n2 = static_cast<std::size_t>(spec.count2());
  const std::size_t total = n1 * n2;
  std::vector<PointResult> points(total);

  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  auto work = [&] {
    for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      const int i = static_cast<int>(idx / n2);
      const int j = static_cast<int>(idx % n2);
      points[idx] = evaluate_point(spec.point(i, j), spec.mode, spec.observables, spec.solver,
                                   spec.transmission_scale);
      std::lock_guard lock(progress_mutex);
      ++done;
      if (options.progress) options.progress(done, total);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  out.data.assign(spec.observables.size(), std::vector<double>(total));
  out.photon_number.resize(total);
  out.status.resize(total);
  out.messages.resize(total);
  std::size_t flagged = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (std::size_t k = 0; k < spec.observables.size(); ++k) out.data[k][idx] = points[idx].values[k];
    out.photon_number[idx] = points[idx].photon_number;
    out.status[idx] = points[idx].status;
    out.messages[idx] = std::move(points[idx].message);
    if (out.status[idx] != PointStatus::ok) ++flagged;
  }
  if (flagged) spdlog::warn("{}: {} of {} points flagged", spec.name, flagged, total);

  out.provenance = {{"spec", to_json(spec)},
                    {"code_version", LZSM_VERSION},
                    {"timestamp", utc_timestamp()},
                    {"notes", nlohmann::json::array()}};
  const double g_ratio = std::abs(spec.base.coupling_g) / spec.base.resonator_freq;
  if (g_ratio >= kUltrastrongRatio) {
    out.provenance["notes"].push_back(
        "coupling g/f0 = " + std::to_string(g_ratio) +
        " approaches the ultrastrong regime; counter-rotating terms are neglected, results are "
        "qualitative");
  }
  return out;
}

std::vector<GridResult> coupling_sweep(const SweepSpec& spec,
                                       const std::vector<double>& g_multipliers,
                                       const RunOptions& options) {
  for (double m : g_multipliers) {
    if (!(m > 0.0)) throw SpecError("coupling multipliers must be > 0");
  }
  std::vector<GridResult> results;
  results.reserve(g_multipliers.size());
  for (double m : g_multipliers) {
    SweepSpec s = spec;
    s.base.coupling_g = m * spec.base.coupling_g;
    s.name = fmt::format("{}_g{:g}", spec.name, m);
    auto r = run_sweep(s, options);
    r.provenance["g_multiplier"] = m;
    r.provenance["g0"] = spec.base.coupling_g;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace lzsm
