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
#include <numbers>

#include "lzsm/operator_algebra.hpp"

// Flux qubit coupled to a truncated resonator.
//
// Units: every parameter is a linear frequency X/2pi in GHz and times are in
// ns. The Hamiltonian builders are the only place where frequencies become
// angular (rad/ns, hbar = 1).
//
// The composite space is qubit (x) resonator with index q * fock_levels + n.
// Qubit index 0 is the upper eigenstate (sigma_z = +1) and index 1 the ground.

namespace lzsm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct SystemParams {
  double delta = 5.41;            // qubit gap, GHz
  double epsilon0 = 0.0;          // static bias, GHz
  double resonator_freq = 7.6767; // f0, GHz
  double coupling_g = 0.177;      // GHz
  double probe_amp = 0.001;       // GHz
  double probe_freq = 7.6767;     // GHz
  double drive_amp = 0.0;         // GHz
  double drive_freq = 0.5;        // GHz
  double gamma1 = 0.003;          // GHz
  double gamma2 = 0.0015;         // GHz
  double kappa = 0.00471;         // GHz
  std::size_t fock_levels = 3;
  /// Adds the i dS/dt S^dagger term of the moving eigenbasis (off by default).
  bool geometric_term = false;

  /// Throws SpecError on the first violated invariant.
  void validate() const;

  std::size_t dim() const { return 2 * fock_levels; }
};

/// Device parameter set used for every shipped configuration.
SystemParams reference_params();

struct FluxCalibration {
  double lever_ghz_per_flux = 250.0;  // d epsilon0 / d(Phi/Phi0)
  double drive_ghz_per_vrms = 10.0;   // d A_D / d V_rms

  void validate() const;
};

/// Probe amplitude proportional to sqrt(power), pinned at one reference point.
struct ProbeCalibration {
  double reference_dbm = -40.0;
  double reference_amp_ghz = 0.001;
};

double epsilon_from_flux(double flux_ratio, const FluxCalibration& cal);
double flux_from_epsilon(double epsilon, const FluxCalibration& cal);
double drive_amp_from_vrms(double vrms, const FluxCalibration& cal);
double probe_amp_from_power(double power_dbm, const ProbeCalibration& cal);

double qubit_frequency(double delta, double epsilon);
double epsilon_of_time(double epsilon0, double drive_amp, double drive_freq, double t);
/// g * delta / sqrt(delta^2 + epsilon^2), GHz.
double effective_coupling(double g, double delta, double epsilon);
/// g_eff^2 / (f_Q - f0) at the static bias, GHz; negative means the resonator
/// is pushed up. Validation only. Throws DispersiveRegimeViolation near resonance.
double dispersive_shift_estimate(const SystemParams& p);

/// Basis change between the diabatic and eigenstate bases,
/// S = [[g+, g-], [g-, -g+]] with g+- = sqrt((1 +- epsilon / omega_Q) / 2).
ComplexMatrix transfer_matrix(double delta, double epsilon);

/// Operators on the composite space.
struct CompositeOps {
  ComplexMatrix sz;         // sigma_z (x) I
  ComplexMatrix sx;         // sigma_x (x) I
  ComplexMatrix sy;         // sigma_y (x) I
  ComplexMatrix sm;         // sigma_minus (x) I
  ComplexMatrix a;          // I (x) a
  ComplexMatrix number;     // I (x) a^dagger a
  ComplexMatrix exchange;   // sigma_plus a + sigma_minus a^dagger
  ComplexMatrix excited;    // |e><e| (x) I
  ComplexMatrix identity;
};
CompositeOps composite_ops(std::size_t fock_levels);

/// H_Q + H_R + H_C + H_P(t) + H_D(t) in the diabatic basis, rad/ns.
ComplexMatrix build_lab_hamiltonian(const SystemParams& p, double t);

/// Probe–frame RWA Hamiltonian written as
///   H(t) = static_part + qubit_coeff(t) * qubit_part + coupling_coeff(t) * coupling_part
///          [+ geometric_x(t) * sx + geometric_y(t) * sy]
/// with qubit_part = sigma_z / 2 and coupling_part the exchange operator.
/// The drive only enters through epsilon(t).
struct DressedHamiltonianTerms {
  ComplexMatrix static_part;
  ComplexMatrix qubit_part;
  ComplexMatrix coupling_part;
  ComplexMatrix geometric_x;
  ComplexMatrix geometric_y;
  bool has_geometric = false;

  struct Coefficients {
    double qubit;     // delta omega_Q(t), rad/ns
    double coupling;  // g_eff(t), rad/ns
    double geo_x;
    double geo_y;
  };
  Coefficients coefficients(double t) const;

  ComplexMatrix assemble(double t) const;

  SystemParams params;
};
DressedHamiltonianTerms dressed_rwa_terms(const SystemParams& p);

ComplexMatrix build_dressed_rwa_hamiltonian(const SystemParams& p, double t);

}  // namespace lzsm
