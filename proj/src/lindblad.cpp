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

#include "lzsm/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <spdlog/spdlog.h>

namespace lzsm {

namespace {

std::size_t isqrt_exact(std::size_t n) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (r * r != n) {
    throw InvalidDimension("vector length " + std::to_string(n) + " is not a perfect square");
  }
  return r;
}

// Projects a vectorized matrix onto its Hermitian part in place and returns
// the largest |v_ij - conj(v_ji)| that was removed.
double hermitize(std::span<cx> v, std::size_t d) {
  double defect = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = j; i < d; ++i) {
      cx& lower = v[i + j * d];
      cx& upper = v[j + i * d];
      defect = std::max(defect, std::abs(lower - std::conj(upper)));
      const cx mean = 0.5 * (lower + std::conj(upper));
      lower = mean;
      upper = std::conj(mean);
    }
  }
  return defect;
}

cx vec_trace(std::span<const cx> v, std::size_t d) {
  cx t{};
  for (std::size_t i = 0; i < d; ++i) t += v[i + i * d];
  return t;
}

}  // namespace

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_square()) throw InvalidDimension("DensityMatrix: matrix is not square");
  const double defect = hermiticity_defect(m_);
  if (defect > 1e-9) {
    throw ContractViolation("DensityMatrix: not Hermitian (defect " + std::to_string(defect) +
                            ")");
  }
  const cx tr = m_.trace();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw ContractViolation("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
  }
}

DensityMatrix DensityMatrix::pure(std::span<const cx> psi) {
  double norm = 0.0;
  for (const auto& c : psi) norm += std::norm(c);
  ComplexMatrix m(psi.size(), psi.size());
  for (std::size_t r = 0; r < psi.size(); ++r)
    for (std::size_t c = 0; c < psi.size(); ++c) m(r, c) = psi[r] * std::conj(psi[c]) / norm;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidDimension("basis_state: index out of range");
  ComplexMatrix m(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix((1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

DensityMatrix DensityMatrix::from_vector(std::span<const cx> vec) {
  return DensityMatrix(unvectorize(vec));
}

std::vector<cx> DensityMatrix::vectorized() const { return vectorize(m_); }

cx DensityMatrix::expectation(const ComplexMatrix& op) const {
  if (op.rows() != dim() || op.cols() != dim()) {
    throw InvalidDimension("expectation: operator shape does not match the state");
  }
  cx s{};
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) s += op(i, j) * m_(j, i);
  return s;
}

double DensityMatrix::purity() const { return expectation(m_).real(); }

double DensityMatrix::min_eigenvalue() const {
  // Hermitian to 1e-9 by construction; symmetrize before the stricter check.
  ComplexMatrix h = 0.5 * (m_ + dagger(m_));
  return hermitian_eigensystem(h).values.front();
}

std::vector<cx> vectorize(const ComplexMatrix& m) {
  std::vector<cx> v(m.rows() * m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v[i + j * m.rows()] = m(i, j);
  return v;
}

ComplexMatrix unvectorize(std::span<const cx> v) {
  const std::size_t d = isqrt_exact(v.size());
  ComplexMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) m(i, j) = v[i + j * d];
  return m;
}

// --- Dissipators and superoperators ----------------------------------------

DissipatorSet build_dissipators(const SystemParams& p) {
  p.validate();
  const auto ops = composite_ops(p.fock_levels);
  DissipatorSet d;
  d.ops.push_back(std::sqrt(kTwoPi * p.gamma1) * ops.sm);
  d.ops.push_back(std::sqrt(kTwoPi * p.gamma2) * ops.sz);
  d.ops.push_back(std::sqrt(kTwoPi * p.kappa) * ops.a);
  return d;
}

std::size_t Liouvillian::hilbert_dim() const { return isqrt_exact(superop.rows()); }

Liouvillian build_liouvillian(const ComplexMatrix& h, const DissipatorSet& d) {
  if (!h.is_square()) throw InvalidDimension("build_liouvillian: Hamiltonian is not square");
  const double defect = hermiticity_defect(h);
  if (defect > 1e-12 * std::max(1.0, h.max_abs())) {
    throw ContractViolation("build_liouvillian: Hamiltonian is not Hermitian (defect " +
                            std::to_string(defect) + ")");
  }
  const std::size_t n = h.rows();
  const auto id = ComplexMatrix::identity(n);
  const cx minus_i{0.0, -1.0};

  ComplexMatrix l = minus_i * (kron(id, h) - kron(transpose(h), id));
  for (const auto& op : d.ops) {
    if (op.rows() != n || op.cols() != n) {
      throw InvalidDimension("build_liouvillian: dissipator shape does not match H");
    }
    const auto ldl = matmul(dagger(op), op);
    l += kron(conjugate(op), op);
    l -= 0.5 * kron(id, ldl);
    l -= 0.5 * kron(transpose(ldl), id);
  }
  return {std::move(l)};
}

DensityMatrix steady_state(const ComplexMatrix& h, const DissipatorSet& d) {
  const bool dissipative = std::any_of(d.ops.begin(), d.ops.end(),
                                       [](const ComplexMatrix& op) { return op.max_abs() > 0.0; });
  if (!dissipative) {
    throw SingularMatrix("steady_state: no nonzero dissipator, stationary state is not unique");
  }
  const std::size_t n = h.rows();
  auto l = build_liouvillian(h, d).superop;
  // trace(rho) = 1 replaces the (0,0) population equation, which is linearly
  // dependent on the other population rows because L preserves the trace.
  for (std::size_t c = 0; c < n * n; ++c) l(0, c) = 0.0;
  for (std::size_t i = 0; i < n; ++i) l(0, i + i * n) = 1.0;
  std::vector<cx> rhs(n * n, cx{});
  rhs[0] = 1.0;
  auto v = solve_linear(l, rhs);
  hermitize(v, n);
  const cx tr = vec_trace(v, n);
  for (auto& x : v) x /= tr.real();
  return DensityMatrix::from_vector(v);
}

DensityMatrix steady_state(const SystemParams& p) {
  if (p.drive_amp != 0.0) {
    throw ContractViolation("steady_state: drive_amp must be 0 for a static steady state");
  }
  return steady_state(build_dressed_rwa_hamiltonian(p, 0.0), build_dissipators(p));
}

// --- Generator -------------------------------------------------------------

Generator::Sparse Generator::Sparse::from_dense(const ComplexMatrix& m) {
  Sparse s;
  s.row_start.reserve(m.rows() + 1);
  s.row_start.push_back(0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) != cx{}) {
        s.col.push_back(c);
        s.val.push_back(m(r, c));
      }
    }
    s.row_start.push_back(s.col.size());
  }
  return s;
}

void Generator::Sparse::multiply_add(cx scale, std::span<const cx> x, std::span<cx> y) const {
  const std::size_t rows = row_start.size() - 1;
  for (std::size_t r = 0; r < rows; ++r) {
    cx acc{};
    for (std::size_t k = row_start[r]; k < row_start[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] += scale * acc;
  }
}

ComplexMatrix Generator::Sparse::to_dense(std::size_t n) const {
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r + 1 < row_start.size(); ++r)
    for (std::size_t k = row_start[r]; k < row_start[r + 1]; ++k) m(r, col[k]) = val[k];
  return m;
}

Generator Generator::constant(const Liouvillian& l) {
  Generator g;
  g.hilbert_dim_ = l.hilbert_dim();
  g.static_ = Sparse::from_dense(l.superop);
  return g;
}

Generator Generator::constant(const ComplexMatrix& h, const DissipatorSet& d) {
  return constant(build_liouvillian(h, d));
}

Generator Generator::dressed(const SystemParams& p) {
  const auto terms = dressed_rwa_terms(p);
  const auto diss = build_dissipators(p);
  Generator g;
  g.hilbert_dim_ = p.dim();
  g.static_ = Sparse::from_dense(build_liouvillian(terms.static_part, diss).superop);
  g.parts_.push_back(Sparse::from_dense(build_liouvillian(terms.qubit_part, {}).superop));
  g.parts_.push_back(Sparse::from_dense(build_liouvillian(terms.coupling_part, {}).superop));
  if (terms.has_geometric) {
    g.parts_.push_back(Sparse::from_dense(build_liouvillian(terms.geometric_x, {}).superop));
    g.parts_.push_back(Sparse::from_dense(build_liouvillian(terms.geometric_y, {}).superop));
  }
  g.coefficients_ = [terms](double t, std::span<double> out) {
    const auto c = terms.coefficients(t);
    out[0] = c.qubit;
    out[1] = c.coupling;
    if (out.size() > 2) {
      out[2] = c.geo_x;
      out[3] = c.geo_y;
    }
  };
  return g;
}

void Generator::apply(double t, std::span<const cx> x, std::span<cx> y) const {
  std::fill(y.begin(), y.end(), cx{});
  static_.multiply_add(1.0, x, y);
  if (parts_.empty()) return;
  std::array<double, 8> coeff{};
  coefficients_(t, std::span<double>(coeff.data(), parts_.size()));
  for (std::size_t k = 0; k < parts_.size(); ++k) {
    if (coeff[k] != 0.0) parts_[k].multiply_add(coeff[k], x, y);
  }
}

Liouvillian Generator::at(double t) const {
  const std::size_t n = vector_dim();
  ComplexMatrix l = static_.to_dense(n);
  if (!parts_.empty()) {
    std::array<double, 8> coeff{};
    coefficients_(t, std::span<double>(coeff.data(), parts_.size()));
    for (std::size_t k = 0; k < parts_.size(); ++k) l += coeff[k] * parts_[k].to_dense(n);
  }
  return {std::move(l)};
}

// --- Integrator ------------------------------------------------------------

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

std::vector<cx> integrate(const Generator& gen, std::vector<cx> y, double t0, double t1,
                          std::span<const double> sample_times, const PropagationOptions& opts,
                          const std::function<void(double, std::span<const cx>)>& on_sample,
                          PropagationStats* stats_out) {
  const std::size_t n = gen.vector_dim();
  const std::size_t d = gen.hilbert_dim();
  if (y.size() != n) throw InvalidDimension("integrate: state size does not match generator");
  if (!(t1 >= t0)) throw ContractViolation("integrate: t1 must not precede t0");
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    if (sample_times[k] <= t0 - 1e-12 || sample_times[k] > t1 + 1e-12 ||
        (k > 0 && sample_times[k] < sample_times[k - 1])) {
      throw ContractViolation("integrate: sample times must be ascending within (t0, t1]");
    }
  }

  double h_max = opts.dt_max;
  if (opts.drive_step_cap > 0.0) h_max = std::min(h_max, opts.drive_step_cap);

  PropagationStats stats;
  std::vector<cx> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  gen.apply(t0, y, k1);
  ++stats.rhs_evaluations;

  double t = t0;
  double h = std::min(h_max, 1e-3);
  std::size_t next_sample = 0;
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
    on_sample(sample_times[next_sample], y);
    ++next_sample;
  }

  while (t < t1) {
    const double target =
        next_sample < sample_times.size() ? std::min(sample_times[next_sample], t1) : t1;
    double step = std::min(h, target - t);
    bool clamped = step < h;
    if (target - (t + step) < 1e-12 * std::max(1.0, std::abs(target))) {
      step = target - t;
    }
    if (step < opts.dt_min && target - t > opts.dt_min) {
      throw StiffnessError("integrate: step size " + std::to_string(step) +
                           " ns underflowed at t = " + std::to_string(t) + " ns");
    }

    auto stage = [&](std::span<cx> out, double tc, auto&&... terms) {
      for (std::size_t i = 0; i < n; ++i) {
        cx acc{};
        ((acc += terms.first * terms.second[i]), ...);
        tmp[i] = y[i] + step * acc;
      }
      gen.apply(tc, tmp, out);
      ++stats.rhs_evaluations;
    };
    using P = std::pair<double, const std::vector<cx>&>;
    stage(k2, t + c2 * step, P{a21, k1});
    stage(k3, t + c3 * step, P{a31, k1}, P{a32, k2});
    stage(k4, t + c4 * step, P{a41, k1}, P{a42, k2}, P{a43, k3});
    stage(k5, t + c5 * step, P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4});
    stage(k6, t + step, P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
    for (std::size_t i = 0; i < n; ++i) {
      y_new[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    gen.apply(t + step, y_new, k7);
    ++stats.rhs_evaluations;

    // elementwise (max-norm) local error
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cx e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
      const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / sc);
    }

    if (!(err <= 1.0)) {
      ++stats.rejected_steps;
      const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h = std::min(step, h) * std::min(1.0, factor);
      if (h < opts.dt_min) {
        throw StiffnessError("integrate: step size " + std::to_string(h) +
                             " ns underflowed at t = " + std::to_string(t) + " ns");
      }
      continue;
    }

    ++stats.accepted_steps;
    const double herm = hermitize(y_new, d);
    const double tr = vec_trace(y_new, d).real();
    const double drift = std::abs(tr - 1.0);
    stats.max_trace_drift = std::max(stats.max_trace_drift, drift);
    stats.max_hermiticity_drift = std::max(stats.max_hermiticity_drift, herm);
    if (drift > opts.drift_error_threshold) {
      throw InvariantDrift("integrate: trace drifted by " + std::to_string(drift) +
                           " at t = " + std::to_string(t + step) + " ns");
    }
    if (drift > opts.drift_log_threshold || herm > opts.drift_log_threshold) {
      ++stats.drift_events;
      spdlog::debug("integrate: invariant correction trace={:.3e} herm={:.3e} at t={:.6f} ns",
                    drift, herm, t + step);
    }
    for (auto& v : y_new) v /= tr;
    // L commutes with Hermitian conjugation and scaling, so the FSAL stage can
    // be corrected the same way instead of being re-evaluated.
    hermitize(k7, d);
    for (auto& v : k7) v /= tr;

    t = (step == target - t) ? target : t + step;
    std::swap(y, y_new);
    std::swap(k1, k7);

    const double factor = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    const double proposed = std::min(h_max, step * factor);
    h = clamped ? std::max(h, proposed) : proposed;
    h = std::min(h, h_max);

    while (next_sample < sample_times.size() && sample_times[next_sample] <= t + 1e-12) {
      on_sample(sample_times[next_sample], y);
      ++next_sample;
    }
  }
  if (stats_out) *stats_out = stats;
  return y;
}

Trajectory propagate(const DensityMatrix& rho0, const Generator& gen, double t_final,
                     std::span<const double> sample_times, const PropagationOptions& opts) {
  if (!(t_final > 0.0)) throw ContractViolation("propagate: t_final must be > 0");
  if (rho0.dim() != gen.hilbert_dim()) {
    throw InvalidDimension("propagate: state dimension does not match generator");
  }
  Trajectory traj;
  integrate(
      gen, rho0.vectorized(), 0.0, t_final, sample_times, opts,
      [&](double t, std::span<const cx> v) {
        traj.times.push_back(t);
        traj.states.push_back(DensityMatrix::from_vector(v));
      },
      &traj.stats);
  return traj;
}

Trajectory propagate(const DensityMatrix& rho0, const SystemParams& p, double t_final,
                     double dt_max, std::span<const double> sample_times) {
  PropagationOptions opts;
  opts.dt_max = dt_max;
  if (p.drive_amp > 0.0 && p.drive_freq > 0.0) opts.drive_step_cap = 1.0 / (50.0 * p.drive_freq);
  return propagate(rho0, Generator::dressed(p), t_final, sample_times, opts);
}

// --- Periodic averaging ----------------------------------------------------

int default_transient_periods(const SystemParams& p) {
  if (!(p.drive_freq > 0.0)) throw ContractViolation("default_transient_periods: drive_freq <= 0");
  double slowest = std::numeric_limits<double>::infinity();
  if (p.gamma1 > 0.0) slowest = std::min(slowest, kTwoPi * p.gamma1);
  if (p.kappa > 0.0) slowest = std::min(slowest, 0.5 * kTwoPi * p.kappa);
  if (!std::isfinite(slowest)) return 1;
  const double periods = 10.0 * p.drive_freq / slowest;
  return std::max(1, static_cast<int>(std::ceil(periods)));
}

PeriodicResult periodic_average(const SystemParams& p, const PeriodicSettings& settings,
                                std::span<const StateFunctional> functionals,
                                double window_offset_periods) {
  p.validate();
  if (!(p.drive_freq > 0.0)) throw ContractViolation("periodic_average: drive_freq must be > 0");
  if (settings.n_average_periods < 1) {
    throw ContractViolation("periodic_average: n_average_periods must be >= 1");
  }
  if (settings.samples_per_period < 64) {
    throw ContractViolation("periodic_average: need at least 64 samples per period");
  }
  const int transient =
      settings.n_transient_periods > 0 ? settings.n_transient_periods : default_transient_periods(p);

  SystemParams undriven = p;
  undriven.drive_amp = 0.0;
  const DensityMatrix rho0 = steady_state(undriven);

  PropagationOptions opts = settings.propagation;
  if (p.drive_amp > 0.0) opts.drive_step_cap = 1.0 / (50.0 * p.drive_freq);

  const double period = 1.0 / p.drive_freq;
  const int per = settings.samples_per_period;
  const int total_periods = settings.n_average_periods + 1;  // one extra for the convergence check
  const double window_start = (transient + window_offset_periods) * period;
  const double monitor_start = window_start - period;
  const double t_end = window_start + settings.n_average_periods * period;

  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(total_periods * per));
  for (int k = 1; k <= total_periods * per; ++k) {
    samples.push_back(monitor_start + period * static_cast<double>(k) / per);
  }

  const std::size_t nf = functionals.size();
  // per-period sums, index 0 is the monitoring period before the window
  std::vector<std::vector<double>> period_sums(total_periods, std::vector<double>(nf, 0.0));
  std::size_t sample_index = 0;

  PeriodicResult result;
  result.transient_periods = transient;

  auto on_sample = [&](double, std::span<const cx> v) {
    const auto rho = DensityMatrix::from_vector(v);
    const std::size_t period_index = sample_index / static_cast<std::size_t>(per);
    for (std::size_t f = 0; f < nf; ++f) period_sums[period_index][f] += functionals[f](rho);
    ++sample_index;
  };
  integrate(Generator::dressed(p), rho0.vectorized(), 0.0, t_end, samples, opts, on_sample,
            &result.stats);

  result.values.assign(nf, 0.0);
  for (int k = 1; k < total_periods; ++k)
    for (std::size_t f = 0; f < nf; ++f) result.values[f] += period_sums[k][f];
  const double denom = static_cast<double>(settings.n_average_periods) * per;
  for (auto& v : result.values) v /= denom;

  for (std::size_t f = 0; f < nf; ++f) {
    const double last = period_sums[total_periods - 1][f] / per;
    const double prev = period_sums[total_periods - 2][f] / per;
    const double scale = std::max(std::abs(last), std::abs(prev));
    const double change = scale > 1e-12 ? std::abs(last - prev) / scale : 0.0;
    result.last_period_change = std::max(result.last_period_change, change);
  }
  result.converged = result.last_period_change <= 1e-4;
  if (!result.converged) {
    spdlog::debug("periodic_average: last two periods differ by {:.3e} (relative)",
                  result.last_period_change);
  }
  return result;
}

double periodic_average(const SystemParams& p, const PeriodicSettings& settings,
                        const ComplexMatrix& observable) {
  const StateFunctional f = [&observable](const DensityMatrix& rho) {
    return rho.expectation(observable).real();
  };
  return periodic_average(p, settings, std::span<const StateFunctional>(&f, 1)).values.front();
}

}  // namespace lzsm
