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
#include <span>
#include <vector>

#include "lzsm/model.hpp"
#include "lzsm/operator_algebra.hpp"

// Lindblad dynamics in the instantaneous eigenbasis.
//
// Vectorization is column-major throughout: vec(rho)[i + j * d] = rho(i, j),
// so vec(A X B) = (B^T (x) A) vec(X).

namespace lzsm {

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Checks Hermiticity and unit trace to 1e-9; throws ContractViolation.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix pure(std::span<const cx> psi);
  /// |index><index| in the computational basis.
  static DensityMatrix basis_state(std::size_t dim, std::size_t index);
  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix from_vector(std::span<const cx> vec);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }
  cx operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  std::vector<cx> vectorized() const;
  /// tr(op * rho).
  cx expectation(const ComplexMatrix& op) const;
  double purity() const;
  double min_eigenvalue() const;

 private:
  ComplexMatrix m_;
};

std::vector<cx> vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(std::span<const cx> v);

struct DissipatorSet {
  std::vector<ComplexMatrix> ops;  // each already scaled by sqrt(rate)
};

/// sqrt(2 pi Gamma1) sigma_-, sqrt(2 pi Gamma2) sigma_z, sqrt(2 pi kappa) a on
/// the composite space.
DissipatorSet build_dissipators(const SystemParams& p);

struct Liouvillian {
  ComplexMatrix superop;  // d^2 x d^2
  std::size_t hilbert_dim() const;
  std::vector<cx> apply(std::span<const cx> vec_rho) const { return matvec(superop, vec_rho); }
};

/// -i (I (x) H - H^T (x) I) + sum_k [conj(L) (x) L - (I (x) L^dag L + (L^dag L)^T (x) I) / 2].
/// Throws ContractViolation for non-Hermitian H.
Liouvillian build_liouvillian(const ComplexMatrix& h, const DissipatorSet& d);

/// Unique stationary state of a time-independent generator, found by swapping
/// one row of the superoperator for the trace condition.
DensityMatrix steady_state(const ComplexMatrix& h, const DissipatorSet& d);
/// Steady state of the undriven dressed Hamiltonian. Requires drive_amp == 0.
DensityMatrix steady_state(const SystemParams& p);

/// Time-dependent generator L(t) = L_0 + sum_k c_k(t) L_k stored sparsely.
class Generator {
 public:
  using CoefficientFn = std::function<void(double t, std::span<double> out)>;

  static Generator constant(const Liouvillian& l);
  static Generator constant(const ComplexMatrix& h, const DissipatorSet& d);
  /// Dressed RWA generator with the model's dissipators.
  static Generator dressed(const SystemParams& p);

  std::size_t hilbert_dim() const { return hilbert_dim_; }
  std::size_t vector_dim() const { return hilbert_dim_ * hilbert_dim_; }
  bool time_dependent() const { return !parts_.empty(); }

  void apply(double t, std::span<const cx> x, std::span<cx> y) const;
  /// Dense L(t); used by tests and steady-state solves.
  Liouvillian at(double t) const;

 private:
  struct Sparse {
    std::vector<std::size_t> row_start;
    std::vector<std::size_t> col;
    std::vector<cx> val;
    static Sparse from_dense(const ComplexMatrix& m);
    void multiply_add(cx scale, std::span<const cx> x, std::span<cx> y) const;
    ComplexMatrix to_dense(std::size_t n) const;
  };

  std::size_t hilbert_dim_ = 0;
  Sparse static_;
  std::vector<Sparse> parts_;
  CoefficientFn coefficients_;
};

struct PropagationOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double dt_max = 0.05;  // ns
  /// Extra step cap, 1/(50 f_D) for driven runs; <= 0 disables.
  double drive_step_cap = 0.0;
  double dt_min = 1e-9;
  double drift_log_threshold = 1e-7;
  double drift_error_threshold = 1e-5;
};

struct PropagationStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  std::size_t drift_events = 0;    // corrections above drift_log_threshold
  double max_trace_drift = 0.0;    // before renormalization
  double max_hermiticity_drift = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  PropagationStats stats;
};

/// Dormand-Prince 5(4) integration of d vec(rho)/dt = L(t) vec(rho) from t0 to
/// t1. `on_sample` is invoked at each requested time (ascending, in (t0, t1])
/// with the vectorized state. The state is re-Hermitized and renormalized after
/// every accepted step. Returns the final vectorized state.
std::vector<cx> integrate(const Generator& gen, std::vector<cx> state, double t0, double t1,
                          std::span<const double> sample_times, const PropagationOptions& opts,
                          const std::function<void(double, std::span<const cx>)>& on_sample,
                          PropagationStats* stats = nullptr);

Trajectory propagate(const DensityMatrix& rho0, const Generator& gen, double t_final,
                     std::span<const double> sample_times, const PropagationOptions& opts = {});

/// Dressed-frame evolution for a parameter point. The step cap 1/(50 f_D) is
/// applied whenever the drive is on.
Trajectory propagate(const DensityMatrix& rho0, const SystemParams& p, double t_final,
                     double dt_max, std::span<const double> sample_times);

struct PeriodicSettings {
  int n_transient_periods = 0;  // <= 0 selects default_transient_periods
  int n_average_periods = 4;
  int samples_per_period = 64;
  PropagationOptions propagation{};
};

/// Ten e-folds of the slowest of 2 pi Gamma1 and pi kappa (the field decay
/// rate), in drive periods; at least 1.
int default_transient_periods(const SystemParams& p);

using StateFunctional = std::function<double(const DensityMatrix&)>;

struct PeriodicResult {
  std::vector<double> values;  // one per functional, averaged over the window
  /// Largest relative change between the last two single-period averages.
  double last_period_change = 0.0;
  bool converged = true;
  int transient_periods = 0;
  PropagationStats stats;
};

/// Start from the undriven steady state, run n_transient drive periods, then
/// average each functional over n_average periods.
PeriodicResult periodic_average(const SystemParams& p, const PeriodicSettings& settings,
                                std::span<const StateFunctional> functionals,
                                double window_offset_periods = 0.0);

/// Time average of Re tr(observable * rho).
double periodic_average(const SystemParams& p, const PeriodicSettings& settings,
                        const ComplexMatrix& observable);

}  // namespace lzsm
