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

#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "lzsm/sweep.hpp"

namespace lzsm {
namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

SweepSpec static_grid() {
  SweepSpec s;
  s.name = "grid";
  s.axis1 = {SweepParameter::flux_ratio, 0.47, 0.53, 5};
  s.axis2 = Axis{SweepParameter::probe_freq, 7.60, 7.75, 4};
  s.observables = {ObservableKind::transmission, ObservableKind::qubit_population};
  return s;
}

TEST(Axis, EndpointsExact) {
  const Axis a{SweepParameter::probe_freq, 7.64, 7.72, 401};
  const auto v = a.values();
  ASSERT_EQ(v.size(), 401u);
  EXPECT_EQ(v.front(), 7.64);
  EXPECT_EQ(v.back(), 7.72);
  EXPECT_NEAR(v[200], 7.68, 1e-12);
  EXPECT_NEAR(a.step(), 0.0002, 1e-15);
}

TEST(SweepParameter, NamesRoundTrip) {
  for (auto p : {SweepParameter::probe_freq, SweepParameter::epsilon0, SweepParameter::flux_ratio,
                 SweepParameter::probe_amp, SweepParameter::drive_amp, SweepParameter::drive_freq,
                 SweepParameter::coupling_g})
    EXPECT_EQ(parse_sweep_parameter(to_string(p)), p);
  EXPECT_EQ(unit_of(SweepParameter::flux_ratio), "Phi_DC/Phi0");
  EXPECT_EQ(unit_of(SweepParameter::drive_amp), "GHz");
  EXPECT_FALSE(parse_sweep_parameter("kappa").has_value());
  EXPECT_EQ(parse_sweep_mode("driven_periodic_average"), SweepMode::driven_periodic_average);
  EXPECT_FALSE(parse_sweep_mode("floquet").has_value());
}

TEST(SweepSpec, PointMapping) {
  const auto s = static_grid();
  const auto p = s.point(4, 1);
  EXPECT_NEAR(p.epsilon0, epsilon_from_flux(0.53, s.calibration), 1e-12);
  EXPECT_NEAR(p.probe_freq, 7.65, 1e-12);
  EXPECT_EQ(p.coupling_g, s.base.coupling_g);
}

TEST(SweepSpec, ValidationRejects) {
  auto expect_reject = [](auto mutate) {
    auto s = static_grid();
    mutate(s);
    EXPECT_THROW(s.validate(), SpecError);
  };
  expect_reject([](SweepSpec& s) { s.axis1.count = 1; });
  expect_reject([](SweepSpec& s) { s.axis1.stop = s.axis1.start; });
  expect_reject([](SweepSpec& s) { s.axis2->parameter = SweepParameter::flux_ratio; });
  expect_reject([](SweepSpec& s) { s.axis2->parameter = SweepParameter::epsilon0; });
  expect_reject([](SweepSpec& s) { s.observables.clear(); });
  expect_reject([](SweepSpec& s) { s.base.drive_amp = 1.0; });
  expect_reject([](SweepSpec& s) { s.axis2->parameter = SweepParameter::drive_amp; });
  expect_reject([](SweepSpec& s) {
    s.mode = SweepMode::driven_periodic_average;
    s.base.drive_freq = 0.0;
  });
  expect_reject([](SweepSpec& s) { s.base.kappa = -1.0; });
  EXPECT_NO_THROW(static_grid().validate());
}

TEST(RunSweep, ShapeAndAxes) {
  SweepSpec s;
  s.axis1 = {SweepParameter::probe_freq, 7.67, 7.68, 2};
  const auto r = run_sweep(s, {.workers = 1});
  EXPECT_EQ(r.count1(), 2u);
  EXPECT_EQ(r.count2(), 1u);
  EXPECT_TRUE(r.axis2_name.empty());
  ASSERT_EQ(r.data.size(), 1u);
  EXPECT_EQ(r.data[0].size(), 2u);
  EXPECT_EQ(r.status[0], PointStatus::ok);
  EXPECT_EQ(r.provenance["code_version"], LZSM_TEST_VERSION);
  EXPECT_TRUE(r.provenance.contains("timestamp"));
  EXPECT_EQ(r.provenance["spec"]["axis1"]["count"], 2);
  EXPECT_THROW(r.observable_index(ObservableKind::photon_number), SpecError);
}

TEST(RunSweep, DeterministicAcrossWorkerCounts) {
  const auto s = static_grid();
  const auto ref = run_sweep(s, {.workers = 1});
  for (unsigned w : {2u, 3u, 8u}) {
    const auto r = run_sweep(s, {.workers = w});
    for (std::size_t k = 0; k < ref.data.size(); ++k)
      for (std::size_t idx = 0; idx < ref.data[k].size(); ++idx)
        EXPECT_TRUE(bit_equal(ref.data[k][idx], r.data[k][idx])) << w << " workers, cell " << idx;
  }
}

TEST(RunSweep, CellsAreIndependentOfTheGrid) {
  const auto s = static_grid();
  const auto r = run_sweep(s, {.workers = 2});
  const auto single = evaluate_point(s.point(2, 3), s.mode, s.observables, s.solver);
  EXPECT_TRUE(bit_equal(r.value(0, 2, 3), single.values[0]));
  EXPECT_TRUE(bit_equal(r.value(1, 2, 3), single.values[1]));
}

TEST(RunSweep, ProgressIsMonotoneAndComplete) {
  std::vector<std::size_t> seen;
  RunOptions opts{.workers = 3, .progress = [&](std::size_t done, std::size_t total) {
                    EXPECT_EQ(total, 20u);
                    seen.push_back(done);
                  }};
  run_sweep(static_grid(), opts);
  ASSERT_EQ(seen.size(), 20u);
  for (std::size_t k = 0; k < seen.size(); ++k) EXPECT_EQ(seen[k], k + 1);
}

TEST(RunSweep, MirrorSymmetryAboutHalfFlux) {
  SweepSpec s;
  s.axis1 = {SweepParameter::flux_ratio, 0.46, 0.54, 9};
  s.observables = {ObservableKind::transmission, ObservableKind::qubit_population};
  const auto r = run_sweep(s, {.workers = 1});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      EXPECT_NEAR(r.value(k, i), r.value(k, 8 - i), 1e-9 * std::abs(r.value(k, i)) + 1e-15);
}

TEST(RunSweep, UltrastrongNote) {
  SweepSpec s;
  s.axis1 = {SweepParameter::probe_freq, 7.6, 7.7, 2};
  EXPECT_TRUE(run_sweep(s, {.workers = 1}).provenance["notes"].empty());
  s.base.coupling_g = 8 * 0.177;
  const auto notes = run_sweep(s, {.workers = 1}).provenance["notes"];
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_NE(notes[0].get<std::string>().find("ultrastrong"), std::string::npos);
}

TEST(CouplingSweep, UnitMultiplierIsBitIdentical) {
  const auto s = static_grid();
  const auto plain = run_sweep(s, {.workers = 1});
  const auto runs = coupling_sweep(s, {0.25, 1.0}, {.workers = 1});
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].name, "grid_g0.25");
  EXPECT_EQ(runs[1].name, "grid_g1");
  EXPECT_EQ(runs[1].provenance["g_multiplier"], 1.0);
  EXPECT_EQ(runs[1].provenance["g0"], 0.177);
  for (std::size_t idx = 0; idx < plain.data[0].size(); ++idx)
    EXPECT_TRUE(bit_equal(plain.data[0][idx], runs[1].data[0][idx]));
  EXPECT_THROW(coupling_sweep(s, {1.0, 0.0}), SpecError);
}

TEST(CouplingSweep, VanishingCouplingGivesBareResonator) {
  SweepSpec s;
  s.axis1 = {SweepParameter::probe_freq, 7.670, 7.684, 8};
  const auto tiny = coupling_sweep(s, {1e-7}, {.workers = 1}).front();
  s.base.coupling_g = 0.0;
  const auto bare = run_sweep(s, {.workers = 1});
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(tiny.value(0, i), bare.value(0, i), 1e-9);
}

TEST(EvaluatePoint, ZeroDriveMatchesStatic) {
  SystemParams p;
  p.epsilon0 = 3.0;
  const std::vector<ObservableKind> obs{ObservableKind::transmission,
                                        ObservableKind::qubit_population};
  SolverKnobs knobs;
  knobs.n_transient_periods = 10;
  const auto stat = evaluate_point(p, SweepMode::static_steady_state, obs, knobs);
  const auto driven = evaluate_point(p, SweepMode::driven_periodic_average, obs, knobs);
  EXPECT_EQ(driven.status, PointStatus::ok);
  for (std::size_t k = 0; k < obs.size(); ++k) EXPECT_NEAR(driven.values[k], stat.values[k], 1e-6);
}

TEST(EvaluatePoint, DrivenMirrorSymmetry) {
  SystemParams p;
  p.drive_amp = 5.0;
  const std::vector<ObservableKind> obs{ObservableKind::transmission,
                                        ObservableKind::qubit_population};
  p.epsilon0 = 3.0;
  const auto plus = evaluate_point(p, SweepMode::driven_periodic_average, obs, {});
  p.epsilon0 = -3.0;
  const auto minus = evaluate_point(p, SweepMode::driven_periodic_average, obs, {});
  ASSERT_EQ(plus.status, PointStatus::ok);
  for (std::size_t k = 0; k < obs.size(); ++k)
    EXPECT_NEAR(plus.values[k], minus.values[k], 1e-5 * std::abs(plus.values[k]) + 1e-12);
}

TEST(EvaluatePoint, FailureIsFlaggedNotThrown) {
  SystemParams p;
  p.drive_amp = 1.0;
  SolverKnobs knobs;
  knobs.samples_per_period = 8;
  const auto r = evaluate_point(p, SweepMode::driven_periodic_average,
                                {ObservableKind::transmission}, knobs);
  EXPECT_EQ(r.status, PointStatus::non_converged);
  EXPECT_TRUE(std::isnan(r.values[0]));
  EXPECT_FALSE(r.message.empty());
}

TEST(EvaluatePoint, TruncationWarning) {
  SystemParams p;
  p.coupling_g = 0.0;
  p.fock_levels = 8;
  p.probe_amp = 0.008;
  const auto r = evaluate_point(p, SweepMode::static_steady_state, {ObservableKind::transmission}, {});
  EXPECT_EQ(r.status, PointStatus::truncation_warning);
  EXPECT_GE(r.photon_number, 3.5);
}

}  // namespace
}  // namespace lzsm
