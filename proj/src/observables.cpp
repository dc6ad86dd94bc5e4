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

#include "lzsm/observables.hpp"

#include <cmath>

namespace lzsm {

namespace {

std::size_t fock_levels_of(const DensityMatrix& rho) {
  if (rho.dim() < 4 || rho.dim() % 2 != 0) {
    throw InvalidDimension("observable: state is not a qubit (x) resonator density matrix");
  }
  return rho.dim() / 2;
}

}  // namespace

std::string_view to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::transmission:
      return "transmission";
    case ObservableKind::qubit_population:
      return "qubit_population";
    case ObservableKind::photon_number:
      return "photon_number";
  }
  return "unknown";
}

std::optional<ObservableKind> parse_observable(std::string_view name) {
  for (auto kind : {ObservableKind::transmission, ObservableKind::qubit_population,
                    ObservableKind::photon_number}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::string_view unit_of(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::transmission:
      return "|Im<a>|";
    case ObservableKind::qubit_population:
      return "probability";
    case ObservableKind::photon_number:
      return "photons";
  }
  return "";
}

double transmission(const DensityMatrix& rho, double scale) {
  const std::size_t levels = fock_levels_of(rho);
  // <a> = sum_{q,n} sqrt(n) rho[(q,n), (q,n-1)]
  cx mean{};
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t n = 1; n < levels; ++n)
      mean += std::sqrt(static_cast<double>(n)) * rho(q * levels + n, q * levels + n - 1);
  return scale * std::abs(mean.imag());
}

double qubit_population(const DensityMatrix& rho) {
  const std::size_t levels = fock_levels_of(rho);
  double p = 0.0;
  for (std::size_t n = 0; n < levels; ++n) p += rho(n, n).real();
  return p;
}

double photon_number(const DensityMatrix& rho) {
  const std::size_t levels = fock_levels_of(rho);
  double s = 0.0;
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t n = 1; n < levels; ++n)
      s += static_cast<double>(n) * rho(q * levels + n, q * levels + n).real();
  return s;
}

double evaluate(ObservableKind kind, const DensityMatrix& rho, double transmission_scale) {
  switch (kind) {
    case ObservableKind::transmission:
      return transmission(rho, transmission_scale);
    case ObservableKind::qubit_population:
      return qubit_population(rho);
    case ObservableKind::photon_number:
      return photon_number(rho);
  }
  throw ContractViolation("evaluate: unknown observable");
}

bool truncation_suspect(double mean_photons, std::size_t fock_levels) {
  return mean_photons >= 0.5 * static_cast<double>(fock_levels - 1);
}

}  // namespace lzsm
