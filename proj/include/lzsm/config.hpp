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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lzsm/model.hpp"
#include "lzsm/sweep.hpp"

// Run configuration documents.
//
//   # comment
//   [system]
//   epsilon0 = 0
//   [sweep]
//   axis1 = probe_freq 7.64 7.72 401
//   observables = transmission, qubit_population
//
// Sections: system, calibration, sweep, output. Keys outside the schema are
// rejected with the line they appear on.

namespace lzsm {

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

class ConfigDocument {
 public:
  using Section = std::map<std::string, ConfigEntry>;

  /// Throws ConfigError for syntax errors, unknown sections or keys, and duplicates.
  static ConfigDocument parse(std::string_view text, std::string source = "<config>");
  /// Throws ConfigError when the file cannot be read.
  static ConfigDocument load(const std::filesystem::path& path);

  /// `section.key=value`, or `key=value` when the key names exactly one
  /// schema entry. The override replaces any value from the file.
  void apply_override(std::string_view assignment);

  const std::map<std::string, Section>& sections() const { return sections_; }
  const ConfigEntry* find(const std::string& section, const std::string& key) const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, Section> sections_;
};

struct RunConfig {
  SweepSpec sweep;
  bool has_axis1 = false;
  bool has_mode = false;
  std::vector<double> g_multipliers;  // empty unless given
  ProbeCalibration probe_calibration;
  std::filesystem::path output_dir = ".";
};

/// Interprets a parsed document. Missing system keys keep their reference values
/// and are listed in one log notice. Throws ConfigError.
RunConfig build_run_config(const ConfigDocument& doc);

/// Effective configuration as a document that build_run_config maps back to the
/// same RunConfig. Bias and probe strength are written as epsilon0 and probe_amp.
std::string serialize(const RunConfig& config);

/// Keys accepted in `section`; empty for unknown sections.
std::vector<std::string> schema_keys(const std::string& section);

}  // namespace lzsm
