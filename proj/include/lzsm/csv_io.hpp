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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lzsm/sweep.hpp"

// Grid files. One CSV per observable:
//
//   # observable: transmission
//   # unit: |Im<a>|
//   # axis1: flux_ratio [Phi_DC/Phi0] count=121
//   # axis2: drive_amp [GHz] count=81
//   # metadata: fig4.meta.json
//   flux_ratio\drive_amp,0,0.1,...
//   0.4,1.23456789e-05,...
//
// 1D grids drop the axis2 line and use "axis1,observable" as the first row.
// Cells carry 9 significant digits; non-converged points are empty.

namespace lzsm {

struct WrittenFiles {
  std::vector<std::filesystem::path> csv;  // in observable order
  std::filesystem::path metadata;
};

/// Writes <name>_<observable>.csv for each observable and <name>.meta.json into
/// `directory`, creating it if needed. Throws IoError.
WrittenFiles write_grid_csv(const GridResult& result, const std::filesystem::path& directory);

/// Sidecar document: provenance, axes, file names and every non-ok point.
nlohmann::json grid_metadata(const GridResult& result);

/// Value as written into a cell ("" for NaN).
std::string format_cell(double value);

struct CsvGrid {
  std::string observable, unit;
  std::string axis1_name, axis1_unit;
  std::string axis2_name, axis2_unit;  // empty for 1D
  std::string metadata_file;
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;  // {} for 1D
  std::vector<double> values;        // row-major count1 x count2, NaN for empty cells

  std::size_t count2() const { return axis2_values.empty() ? 1 : axis2_values.size(); }
  double at(std::size_t i, std::size_t j = 0) const { return values[i * count2() + j]; }
};

/// Parses a file produced by write_grid_csv. Throws IoError naming row and column.
CsvGrid read_grid_csv(const std::filesystem::path& path);

}  // namespace lzsm
