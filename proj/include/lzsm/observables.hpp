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

#include <optional>
#include <string>
#include <string_view>

#include "lzsm/lindblad.hpp"

namespace lzsm {

enum class ObservableKind { transmission, qubit_population, photon_number };

std::string_view to_string(ObservableKind kind);
std::optional<ObservableKind> parse_observable(std::string_view name);
std::string_view unit_of(ObservableKind kind);

/// scale * |Im tr((I (x) a) rho)|. The resonator is the second tensor factor.
double transmission(const DensityMatrix& rho, double scale = 1.0);
/// Weight of the upper qubit level, tr((|e><e| (x) I) rho).
double qubit_population(const DensityMatrix& rho);
/// tr((I (x) a^dagger a) rho).
double photon_number(const DensityMatrix& rho);

double evaluate(ObservableKind kind, const DensityMatrix& rho, double transmission_scale = 1.0);

/// True when the mean photon number reaches half the highest retained level.
bool truncation_suspect(double mean_photons, std::size_t fock_levels);

}  // namespace lzsm
