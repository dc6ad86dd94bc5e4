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

#include "lzsm/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace lzsm {

namespace fs = std::filesystem;

namespace {

std::string csv_name(const GridResult& r, ObservableKind kind) {
  return r.name + "_" + std::string(to_string(kind)) + ".csv";
}

std::string metadata_name(const GridResult& r) { return r.name + ".meta.json"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// "name [unit] count=N"
void parse_axis_header(const std::string& text, std::string& name, std::string& unit, int row) {
  const auto lb = text.find('[');
  const auto rb = text.find(']', lb == std::string::npos ? 0 : lb);
  if (lb == std::string::npos || rb == std::string::npos) {
    throw IoError("row " + std::to_string(row) + ": axis header lacks a [unit]");
  }
  name = trim(text.substr(0, lb));
  unit = text.substr(lb + 1, rb - lb - 1);
}

double parse_number(const std::string& cell, int row, int col, bool allow_empty) {
  const std::string t = trim(cell);
  if (t.empty()) {
    if (allow_empty) return std::numeric_limits<double>::quiet_NaN();
    throw IoError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                  ": empty axis value");
  }
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw IoError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                  ": not a number: '" + t + "'");
  }
  return v;
}

}  // namespace

std::string format_cell(double value) {
  if (std::isnan(value)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

nlohmann::json grid_metadata(const GridResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["provenance"] = r.provenance;
  j["axis1"] = {{"name", r.axis1_name}, {"unit", r.axis1_unit}, {"values", r.axis1_values}};
  if (!r.axis2_values.empty()) {
    j["axis2"] = {{"name", r.axis2_name}, {"unit", r.axis2_unit}, {"values", r.axis2_values}};
  } else {
    j["axis2"] = nullptr;
  }
  auto& files = j["observables"] = nlohmann::json::array();
  for (auto kind : r.observables) {
    files.push_back({{"observable", std::string(to_string(kind))},
                     {"unit", std::string(unit_of(kind))},
                     {"file", csv_name(r, kind)}});
  }
  auto& flagged = j["flagged_points"] = nlohmann::json::array();
  const std::size_t n2 = r.count2();
  std::size_t non_converged = 0;
  for (std::size_t idx = 0; idx < r.status.size(); ++idx) {
    if (r.status[idx] == PointStatus::ok) continue;
    if (r.status[idx] == PointStatus::non_converged) ++non_converged;
    const std::size_t i = idx / n2, jj = idx % n2;
    nlohmann::json p = {{"i", i},
                        {"axis1", r.axis1_values[i]},
                        {"status", std::string(to_string(r.status[idx]))},
                        {"message", r.messages[idx]}};
    if (!r.axis2_values.empty()) {
      p["j"] = jj;
      p["axis2"] = r.axis2_values[jj];
    }
    flagged.push_back(std::move(p));
  }
  j["status_counts"] = {{"total", r.status.size()},
                        {"flagged", flagged.size()},
                        {"non_converged", non_converged}};
  return j;
}

WrittenFiles write_grid_csv(const GridResult& r, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());

  WrittenFiles written;
  const bool two_d = !r.axis2_values.empty();
  for (std::size_t k = 0; k < r.observables.size(); ++k) {
    const auto kind = r.observables[k];
    const fs::path path = directory / csv_name(r, kind);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# observable: " << to_string(kind) << '\n';
    out << "# unit: " << unit_of(kind) << '\n';
    out << "# axis1: " << r.axis1_name << " [" << r.axis1_unit << "] count=" << r.count1() << '\n';
    if (two_d) {
      out << "# axis2: " << r.axis2_name << " [" << r.axis2_unit << "] count=" << r.count2()
          << '\n';
    }
    out << "# metadata: " << metadata_name(r) << '\n';
    if (two_d) {
      out << r.axis1_name << '\\' << r.axis2_name;
      for (double v : r.axis2_values) out << ',' << format_cell(v);
      out << '\n';
    } else {
      out << r.axis1_name << ',' << to_string(kind) << '\n';
    }
    for (std::size_t i = 0; i < r.count1(); ++i) {
      out << format_cell(r.axis1_values[i]);
      for (std::size_t j = 0; j < r.count2(); ++j) {
        const std::size_t idx = i * r.count2() + j;
        out << ',';
        if (r.status[idx] != PointStatus::non_converged) out << format_cell(r.data[k][idx]);
      }
      out << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
    written.csv.push_back(path);
  }

  written.metadata = directory / metadata_name(r);
  std::ofstream meta(written.metadata);
  if (!meta) throw IoError("cannot open " + written.metadata.string() + " for writing");
  meta << grid_metadata(r).dump(2) << '\n';
  meta.flush();
  if (!meta) throw IoError("write failed for " + written.metadata.string());
  return written;
}

CsvGrid read_grid_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvGrid g;
  std::string line;
  int row = 0;
  bool header_seen = false;
  bool two_d = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(line.substr(1, colon - 1));
      const std::string val = trim(line.substr(colon + 1));
      if (key == "observable") g.observable = val;
      else if (key == "unit") g.unit = val;
      else if (key == "axis1") parse_axis_header(val, g.axis1_name, g.axis1_unit, row);
      else if (key == "axis2") {
        parse_axis_header(val, g.axis2_name, g.axis2_unit, row);
        two_d = true;
      } else if (key == "metadata") g.metadata_file = val;
      continue;
    }
    const auto cells = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (two_d) {
        for (std::size_t c = 1; c < cells.size(); ++c)
          g.axis2_values.push_back(parse_number(cells[c], row, static_cast<int>(c + 1), false));
        if (g.axis2_values.empty()) throw IoError("row " + std::to_string(row) + ": no axis2 values");
      } else if (cells.size() != 2) {
        throw IoError("row " + std::to_string(row) + ": expected two columns in a 1D grid");
      }
      continue;
    }
    const std::size_t expected = g.count2() + 1;
    if (cells.size() != expected) {
      throw IoError("row " + std::to_string(row) + ": expected " + std::to_string(expected) +
                    " columns, found " + std::to_string(cells.size()));
    }
    g.axis1_values.push_back(parse_number(cells[0], row, 1, false));
    for (std::size_t c = 1; c < cells.size(); ++c)
      g.values.push_back(parse_number(cells[c], row, static_cast<int>(c + 1), true));
  }
  if (!header_seen || g.axis1_name.empty()) throw IoError(path.string() + ": missing grid header");
  return g;
}

}  // namespace lzsm
