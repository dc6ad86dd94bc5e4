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

#include <string>
#include <vector>

#include "lzsm/operator_algebra.hpp"

namespace lzsm {

struct OracleCheck {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// exp(A) by scaling and squaring of a truncated Taylor series.
ComplexMatrix matrix_exponential(const ComplexMatrix& a);

/// Closed-form and cross-method checks of the solver stack. A check that
/// throws is reported as failed with the exception text in `detail`.
std::vector<OracleCheck> run_oracle_suite();

}  // namespace lzsm
