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

#include "lzsm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "lzsm/lindblad.hpp"
#include "lzsm/model.hpp"
#include "lzsm/observables.hpp"

namespace lzsm {

namespace {

std::vector<double> linspace_open(double t_end, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) t[k] = t_end * (k + 1) / n;
  return t;
}

SystemParams quiet_params(std::size_t fock) {
  SystemParams p;
  p.fock_levels = fock;
  p.coupling_g = 0.0;
  p.probe_amp = 0.0;
  p.gamma1 = 0.0;
  p.gamma2 = 0.0;
  p.kappa = 0.0;
  return p;
}

OracleCheck make(std::string name, double error, double tol, std::string detail = {}) {
  return {std::move(name), error, tol, error <= tol, std::move(detail)};
}

OracleCheck gamma1_decay() {
  SystemParams p = quiet_params(2);
  p.gamma1 = 0.003;
  const double rate = kTwoPi * p.gamma1;
  const auto times = linspace_open(3.0 / rate, 20);
  const auto traj = propagate(DensityMatrix::basis_state(p.dim(), 0), p, times.back(), 0.05, times);
  double err = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    err = std::max(err, std::abs(qubit_population(traj.states[k]) - std::exp(-rate * times[k])));
  return make("qubit relaxation exp(-2 pi Gamma1 t)", err, 1e-4);
}

OracleCheck kappa_decay() {
  SystemParams p = quiet_params(3);
  p.kappa = 0.00471;
  const double rate = kTwoPi * p.kappa;
  const auto times = linspace_open(3.0 / rate, 20);
  // |g, 1>
  const auto rho0 = DensityMatrix::basis_state(p.dim(), p.fock_levels + 1);
  const auto traj = propagate(rho0, p, times.back(), 0.05, times);
  double err = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    err = std::max(err, std::abs(photon_number(traj.states[k]) - std::exp(-rate * times[k])));
  return make("photon loss exp(-2 pi kappa t)", err, 1e-4);
}

OracleCheck qubit_rabi() {
  const std::size_t fock = 2;
  const double omega = kTwoPi * 0.05;
  const auto ops = composite_ops(fock);
  const ComplexMatrix h = (0.5 * omega) * ops.sx;
  const auto gen = Generator::constant(h, DissipatorSet{});
  const auto times = linspace_open(3.0 * kTwoPi / omega, 60);
  // lower qubit level, vacuum
  const auto traj = propagate(DensityMatrix::basis_state(2 * fock, fock), gen, times.back(), times);
  double err = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double s = std::sin(0.5 * omega * times[k]);
    err = std::max(err, std::abs(qubit_population(traj.states[k]) - s * s));
  }
  return make("Rabi oscillation sin^2(Omega t / 2)", err, 1e-6);
}

OracleCheck vacuum_rabi() {
  SystemParams p = quiet_params(3);
  p.coupling_g = 0.177;
  p.epsilon0 = std::sqrt(p.resonator_freq * p.resonator_freq - p.delta * p.delta);
  const double geff = kTwoPi * p.coupling_g * p.delta / p.resonator_freq;
  const auto times = linspace_open(4.0 * M_PI / geff, 60);
  const auto traj = propagate(DensityMatrix::basis_state(p.dim(), 0), p, times.back(), 0.05, times);
  double err = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double c = std::cos(geff * times[k]);
    err = std::max(err, std::abs(qubit_population(traj.states[k]) - c * c));
  }
  return make("vacuum Rabi cos^2(g_eff t)", err, 1e-6);
}

OracleCheck driven_cavity() {
  SystemParams p = quiet_params(12);
  p.kappa = 0.00471;
  p.probe_amp = 0.001;
  p.probe_freq = p.resonator_freq + 0.002;
  const auto rho = steady_state(p);
  const auto ops = composite_ops(p.fock_levels);
  const cx a = rho.expectation(ops.a);
  const cx i{0.0, 1.0};
  const cx exact = -i * (kTwoPi * p.probe_amp) /
                   (i * kTwoPi * (p.resonator_freq - p.probe_freq) + 0.5 * kTwoPi * p.kappa);
  return make("driven damped cavity <a>", std::abs(a - exact) / std::abs(exact), 1e-6,
              "relative error");
}

OracleCheck liouvillian_vs_commutator() {
  SystemParams p;
  p.epsilon0 = 1.3;
  const auto h = build_dressed_rwa_hamiltonian(p, 0.0);
  auto d = build_dissipators(p);
  const std::size_t n = p.dim();
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  ComplexMatrix extra(n, n);
  for (auto& e : extra.entries()) e = 0.1 * cx{normal(rng), normal(rng)};
  d.ops.push_back(extra);
  ComplexMatrix x(n, n);
  for (auto& e : x.entries()) e = cx{normal(rng), normal(rng)};

  const auto l = build_liouvillian(h, d);
  const auto got = unvectorize(l.apply(vectorize(x)));
  const cx i{0.0, 1.0};
  ComplexMatrix want = (-i) * (h * x - x * h);
  for (const auto& op : d.ops) {
    const auto ld = dagger(op);
    const auto ldl = ld * op;
    want += op * x * ld;
    want += (-0.5) * (x * ldl + ldl * x);
  }
  return make("Liouvillian vs direct commutator", (got - want).max_abs(), 1e-12);
}

OracleCheck trace_left_null() {
  SystemParams p;
  p.drive_amp = 3.0;
  p.epsilon0 = 2.0;
  const auto gen = Generator::dressed(p);
  const std::size_t d = p.dim();
  double err = 0.0;
  for (double t : {0.0, 0.37, 1.1}) {
    const auto l = gen.at(t);
    for (std::size_t c = 0; c < d * d; ++c) {
      cx s{};
      for (std::size_t k = 0; k < d; ++k) s += l.superop(k + k * d, c);
      err = std::max(err, std::abs(s));
    }
  }
  return make("trace functional is a left null vector", err, 1e-10);
}

OracleCheck steady_vs_propagate() {
  SystemParams p;
  const auto rho_ss = steady_state(p);
  const double t_end = 30.0 / (0.5 * kTwoPi * p.kappa);
  const std::vector<double> times{t_end};
  const auto traj = propagate(DensityMatrix::basis_state(p.dim(), p.fock_levels), p, t_end, 0.05, times);
  const double err = (traj.states.back().matrix() - rho_ss.matrix()).max_abs();
  return make("steady_state vs long-time propagation", err, 1e-6);
}

OracleCheck exponential_equivalence() {
  SystemParams p;
  p.fock_levels = 2;
  p.probe_amp = 0.01;
  p.epsilon0 = 1.0;
  const auto h = build_dressed_rwa_hamiltonian(p, 0.0);
  const auto d = build_dissipators(p);
  const auto l = build_liouvillian(h, d);
  const double t = 25.0;
  const auto rho0 = DensityMatrix::basis_state(p.dim(), 0);
  const auto want = matvec(matrix_exponential(t * ComplexMatrix(l.superop)), rho0.vectorized());
  const std::vector<double> times{t};
  PropagationOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-11;
  const auto traj = propagate(rho0, Generator::constant(l), t, times, opts);
  const auto got = traj.states.back().vectorized();
  double err = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) err = std::max(err, std::abs(got[k] - want[k]));
  return make("propagation vs matrix exponential (fock_levels = 2)", err, 1e-8,
              "step tolerance 1e-11");
}

std::vector<OracleCheck> driven_invariants() {
  SystemParams p;
  p.epsilon0 = 2.0;
  p.drive_amp = 3.0;
  const double t_end = 10.0 / (kTwoPi * p.gamma1);
  const auto times = linspace_open(t_end, 20);
  const auto traj = propagate(steady_state([&] {
                                SystemParams u = p;
                                u.drive_amp = 0.0;
                                return u;
                              }()),
                              p, t_end, 0.05, times);
  double min_eig = 0.0, herm = 0.0, trace = 0.0;
  for (const auto& rho : traj.states) {
    min_eig = std::min(min_eig, rho.min_eigenvalue());
    herm = std::max(herm, hermiticity_defect(rho.matrix()));
    trace = std::max(trace, std::abs(rho.matrix().trace() - 1.0));
  }
  return {
      make("trace drift per accepted step", traj.stats.max_trace_drift, 1e-7),
      make("positivity (min eigenvalue >= -1e-7)", std::max(0.0, -min_eig), 1e-7),
      make("Hermiticity and unit trace of samples", std::max(herm, trace), 1e-9),
  };
}

}  // namespace

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
  if (!a.is_square()) throw InvalidDimension("matrix_exponential: matrix is not square");
  const double norm = a.norm_inf();
  int squarings = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
  const ComplexMatrix b = std::ldexp(1.0, -squarings) * ComplexMatrix(a);
  const std::size_t n = a.rows();
  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 30; ++k) {
    term = (1.0 / k) * (term * b);
    result += term;
    if (term.max_abs() < 1e-20 * result.max_abs()) break;
  }
  for (; squarings > 0; --squarings) result = result * result;
  return result;
}

std::vector<OracleCheck> run_oracle_suite() {
  std::vector<OracleCheck> out;
  auto run = [&out](const std::string& label, const std::function<std::vector<OracleCheck>()>& f) {
    try {
      for (auto& c : f()) out.push_back(std::move(c));
    } catch (const std::exception& e) {
      out.push_back({label, INFINITY, 0.0, false, e.what()});
    }
  };
  auto one = [](OracleCheck (*f)()) { return [f] { return std::vector<OracleCheck>{f()}; }; };
  run("qubit relaxation", one(gamma1_decay));
  run("photon loss", one(kappa_decay));
  run("Rabi oscillation", one(qubit_rabi));
  run("vacuum Rabi", one(vacuum_rabi));
  run("driven damped cavity", one(driven_cavity));
  run("Liouvillian vs commutator", one(liouvillian_vs_commutator));
  run("trace left null vector", one(trace_left_null));
  run("steady state vs propagation", one(steady_vs_propagate));
  run("matrix exponential", one(exponential_equivalence));
  run("driven invariants", driven_invariants);
  return out;
}

}  // namespace lzsm
