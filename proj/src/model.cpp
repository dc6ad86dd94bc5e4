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

#include "lzsm/model.hpp"

#include <cmath>
#include <string>

namespace lzsm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SpecError(what);
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
  require(std::isfinite(resonator_freq) && resonator_freq > 0.0, "resonator_freq must be > 0");
  require(std::isfinite(epsilon0), "epsilon0 must be finite");
  require(std::isfinite(coupling_g), "coupling_g must be finite");
  require(std::isfinite(probe_freq), "probe_freq must be finite");
  require(std::isfinite(drive_freq) && drive_freq >= 0.0, "drive_freq must be >= 0");
  require(gamma1 >= 0.0 && gamma2 >= 0.0 && kappa >= 0.0, "rates must be >= 0");
  require(probe_amp >= 0.0, "probe_amp must be >= 0");
  require(drive_amp >= 0.0, "drive_amp must be >= 0");
  require(fock_levels >= 2, "fock_levels must be >= 2");
}

SystemParams reference_params() { return SystemParams{}; }

void FluxCalibration::validate() const {
  require(lever_ghz_per_flux > 0.0, "lever_ghz_per_flux must be > 0");
  require(drive_ghz_per_vrms > 0.0, "drive_ghz_per_vrms must be > 0");
}

double epsilon_from_flux(double flux_ratio, const FluxCalibration& cal) {
  return cal.lever_ghz_per_flux * (flux_ratio - 0.5);
}

double flux_from_epsilon(double epsilon, const FluxCalibration& cal) {
  return 0.5 + epsilon / cal.lever_ghz_per_flux;
}

double drive_amp_from_vrms(double vrms, const FluxCalibration& cal) {
  return cal.drive_ghz_per_vrms * vrms;
}

double probe_amp_from_power(double power_dbm, const ProbeCalibration& cal) {
  return cal.reference_amp_ghz * std::pow(10.0, (power_dbm - cal.reference_dbm) / 20.0);
}

double qubit_frequency(double delta, double epsilon) { return std::hypot(delta, epsilon); }

double epsilon_of_time(double epsilon0, double drive_amp, double drive_freq, double t) {
  return epsilon0 + drive_amp * std::sin(kTwoPi * drive_freq * t);
}

double effective_coupling(double g, double delta, double epsilon) {
  return g * delta / qubit_frequency(delta, epsilon);
}

double dispersive_shift_estimate(const SystemParams& p) {
  const double fq = qubit_frequency(p.delta, p.epsilon0);
  const double geff = effective_coupling(p.coupling_g, p.delta, p.epsilon0);
  const double detuning = fq - p.resonator_freq;
  if (std::abs(detuning) <= std::abs(geff)) {
    throw DispersiveRegimeViolation("dispersive_shift_estimate: |f_Q - f0| = " +
                                    std::to_string(std::abs(detuning)) +
                                    " GHz does not exceed g_eff = " + std::to_string(geff));
  }
  return geff * geff / detuning;
}

ComplexMatrix transfer_matrix(double delta, double epsilon) {
  const double wq = qubit_frequency(delta, epsilon);
  const double gp = std::sqrt(0.5 * (1.0 + epsilon / wq));
  const double gm = std::sqrt(0.5 * (1.0 - epsilon / wq));
  return {2, 2, {gp, gm, gm, -gp}};
}

CompositeOps composite_ops(std::size_t fock_levels) {
  const auto a = fock_annihilation(fock_levels);
  const auto id_r = ComplexMatrix::identity(fock_levels);
  const auto id_q = ComplexMatrix::identity(2);
  CompositeOps ops;
  ops.sz = kron(pauli(Pauli::z), id_r);
  ops.sx = kron(pauli(Pauli::x), id_r);
  ops.sy = kron(pauli(Pauli::y), id_r);
  ops.sm = kron(pauli(Pauli::minus), id_r);
  ops.a = kron(id_q, a);
  ops.number = kron(id_q, matmul(dagger(a), a));
  ops.exchange = kron(pauli(Pauli::plus), a) + kron(pauli(Pauli::minus), dagger(a));
  ops.excited = kron(ComplexMatrix(2, 2, {1.0, 0.0, 0.0, 0.0}), id_r);
  ops.identity = ComplexMatrix::identity(2 * fock_levels);
  return ops;
}

ComplexMatrix build_lab_hamiltonian(const SystemParams& p, double t) {
  p.validate();
  const auto ops = composite_ops(p.fock_levels);
  const cx i{0.0, 1.0};
  const double wp = kTwoPi * p.probe_freq;
  const auto adag = dagger(ops.a);

  ComplexMatrix h = (-0.5 * kTwoPi * p.delta) * ops.sx;
  h += (-0.5 * kTwoPi * p.epsilon0) * ops.sz;
  h += (kTwoPi * p.resonator_freq) * (ops.number + 0.5 * ops.identity);
  h += (-kTwoPi * p.coupling_g) * matmul(ops.a + adag, ops.sz);
  h += (kTwoPi * p.probe_amp) * (std::exp(i * wp * t) * ops.a + std::exp(-i * wp * t) * adag);
  h += (-0.5 * kTwoPi * p.drive_amp * std::sin(kTwoPi * p.drive_freq * t)) * ops.sz;
  return h;
}

DressedHamiltonianTerms dressed_rwa_terms(const SystemParams& p) {
  p.validate();
  const auto ops = composite_ops(p.fock_levels);
  DressedHamiltonianTerms terms;
  terms.params = p;
  terms.static_part = (kTwoPi * (p.resonator_freq - p.probe_freq)) * ops.number;
  terms.static_part += (kTwoPi * p.probe_amp) * (ops.a + dagger(ops.a));
  terms.qubit_part = 0.5 * ops.sz;
  terms.coupling_part = ops.exchange;
  terms.has_geometric = p.geometric_term;
  if (p.geometric_term) {
    terms.geometric_x = ops.sx;
    terms.geometric_y = ops.sy;
  }
  return terms;
}

DressedHamiltonianTerms::Coefficients DressedHamiltonianTerms::coefficients(double t) const {
  const auto& p = params;
  const double phase = kTwoPi * p.drive_freq * t;
  const double eps = p.epsilon0 + p.drive_amp * std::sin(phase);
  const double fq = qubit_frequency(p.delta, eps);
  Coefficients c{};
  c.qubit = kTwoPi * (fq - p.probe_freq);
  c.coupling = kTwoPi * p.coupling_g * p.delta / fq;
  if (has_geometric) {
    // i dS/dt S^dagger = (theta_dot / 2) sigma_y with theta = atan2(delta, eps)
    // in the basis where S H_Q S = -omega_Q sigma_z / 2; relabelling the levels
    // so that index 0 is the upper state flips its sign. In the probe frame
    // sigma_pm pick up exp(+-i omega_P t).
    const double eps_dot = p.drive_amp * kTwoPi * p.drive_freq * std::cos(phase);
    const double theta_dot = -p.delta * eps_dot / (fq * fq);
    const double wpt = kTwoPi * p.probe_freq * t;
    c.geo_x = -0.5 * theta_dot * std::sin(wpt);
    c.geo_y = -0.5 * theta_dot * std::cos(wpt);
  }
  return c;
}

ComplexMatrix DressedHamiltonianTerms::assemble(double t) const {
  const auto c = coefficients(t);
  ComplexMatrix h = static_part;
  h += c.qubit * qubit_part;
  h += c.coupling * coupling_part;
  if (has_geometric) {
    h += c.geo_x * geometric_x;
    h += c.geo_y * geometric_y;
  }
  return h;
}

ComplexMatrix build_dressed_rwa_hamiltonian(const SystemParams& p, double t) {
  return dressed_rwa_terms(p).assemble(t);
}

}  // namespace lzsm
