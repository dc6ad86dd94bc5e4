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

#include "lzsm/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

namespace lzsm {

namespace {

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"system",
       {"delta", "epsilon0", "flux_ratio", "resonator_freq", "coupling_g", "probe_amp",
        "probe_power_dbm", "probe_freq", "drive_amp", "drive_vrms", "drive_freq", "gamma1",
        "gamma2", "kappa", "fock_levels", "geometric_term"}},
      {"calibration",
       {"lever_ghz_per_flux", "drive_ghz_per_vrms", "probe_reference_dbm", "probe_reference_amp"}},
      {"sweep",
       {"mode", "axis1", "axis2", "observables", "n_transient_periods", "n_average_periods",
        "samples_per_period", "dt_max", "transmission_scale", "g_multipliers"}},
      {"output", {"directory", "name"}},
  };
  return s;
}

bool in_schema(const std::string& section, const std::string& key) {
  const auto it = schema().find(section);
  return it != schema().end() &&
         std::find(it->second.begin(), it->second.end(), key) != it->second.end();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& section, const std::string& key, const ConfigEntry& e) {
  std::string w = section + "." + key;
  w += e.line > 0 ? " (line " + std::to_string(e.line) + ")" : " (command line)";
  return w;
}

std::vector<std::string> tokens(const std::string& s, bool commas) {
  std::string t = s;
  if (commas) std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

class Reader {
 public:
  Reader(const ConfigDocument& doc, std::string section) : doc_(doc), section_(std::move(section)) {}

  const ConfigEntry* get(const std::string& key) const { return doc_.find(section_, key); }
  bool has(const std::string& key) const { return get(key) != nullptr; }

  double real(const std::string& key, double fallback) const {
    const auto* e = get(key);
    return e ? to_real(key, *e, e->value) : fallback;
  }

  double to_real(const std::string& key, const ConfigEntry& e, const std::string& text) const {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
      fail(key, e, "expected a real number, got '" + text + "'");
    }
    return v;
  }

  long integer(const std::string& key, long fallback) const {
    const auto* e = get(key);
    if (!e) return fallback;
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(e->value.c_str(), &end, 10);
    if (e->value.empty() || end != e->value.c_str() + e->value.size() || errno == ERANGE) {
      fail(key, *e, "expected an integer, got '" + e->value + "'");
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    const auto* e = get(key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    fail(key, *e, "expected true or false, got '" + e->value + "'");
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto* e = get(key);
    return e ? e->value : fallback;
  }

  Axis axis(const std::string& key) const {
    const auto* e = get(key);
    const auto t = tokens(e->value, false);
    if (t.size() != 4) fail(key, *e, "expected '<parameter> <start> <stop> <count>'");
    const auto param = parse_sweep_parameter(t[0]);
    if (!param) fail(key, *e, "unknown sweep parameter '" + t[0] + "'");
    Axis a;
    a.parameter = *param;
    a.start = to_real(key, *e, t[1]);
    a.stop = to_real(key, *e, t[2]);
    const double count = to_real(key, *e, t[3]);
    if (count != std::floor(count) || count < 2 || count > 1e7) {
      fail(key, *e, "count must be an integer >= 2");
    }
    a.count = static_cast<int>(count);
    if (a.start == a.stop) fail(key, *e, "start and stop must differ");
    return a;
  }

  std::vector<double> reals(const std::string& key) const {
    const auto* e = get(key);
    std::vector<double> out;
    if (!e) return out;
    for (const auto& t : tokens(e->value, true)) out.push_back(to_real(key, *e, t));
    if (out.empty()) fail(key, *e, "expected a comma-separated list of numbers");
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const ConfigEntry& e, const std::string& why) const {
    throw ConfigError(doc_.source() + ": " + where(section_, key, e) + ": " + why, e.line);
  }

 private:
  const ConfigDocument& doc_;
  std::string section_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string axis_text(const Axis& a) {
  return std::string(to_string(a.parameter)) + " " + num(a.start) + " " + num(a.stop) + " " +
         std::to_string(a.count);
}

}  // namespace

std::vector<std::string> schema_keys(const std::string& section) {
  const auto it = schema().find(section);
  return it == schema().end() ? std::vector<std::string>{} : it->second;
}

const ConfigEntry* ConfigDocument::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

ConfigDocument ConfigDocument::parse(std::string_view text, std::string source) {
  ConfigDocument doc;
  doc.source_ = std::move(source);
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw ConfigError(doc.source_ + ":" + std::to_string(line_no) + ": " + why, line_no);
    };
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().count(section)) fail("unknown section [" + section + "]");
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) fail("key '" + key + "' appears before any [section]");
    if (key.empty()) fail("empty key");
    if (!in_schema(section, key)) fail("unknown key '" + key + "' in [" + section + "]");
    auto& sec = doc.sections_[section];
    if (sec.count(key)) {
      fail("duplicate key '" + key + "' (first on line " + std::to_string(sec[key].line) + ")");
    }
    sec[key] = ConfigEntry{value, line_no};
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void ConfigDocument::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  std::string section;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
    if (!in_schema(section, key)) throw ConfigError("--set: unknown key '" + section + "." + key + "'");
  } else {
    for (const auto& [name, keys] : schema()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) continue;
      if (!section.empty()) throw ConfigError("--set: key '" + key + "' is ambiguous; use section.key");
      section = name;
    }
    if (section.empty()) throw ConfigError("--set: unknown key '" + key + "'");
  }
  auto& entry = sections_[section][key];
  if (!entry.value.empty() || entry.line > 0) {
    spdlog::info("override {}.{} = {} (config had {})", section, key, value, entry.value);
  } else {
    spdlog::info("override {}.{} = {}", section, key, value);
  }
  entry = ConfigEntry{value, 0};
}

RunConfig build_run_config(const ConfigDocument& doc) {
  RunConfig rc;
  SweepSpec& spec = rc.sweep;

  const Reader cal(doc, "calibration");
  spec.calibration.lever_ghz_per_flux =
      cal.real("lever_ghz_per_flux", spec.calibration.lever_ghz_per_flux);
  spec.calibration.drive_ghz_per_vrms =
      cal.real("drive_ghz_per_vrms", spec.calibration.drive_ghz_per_vrms);
  rc.probe_calibration.reference_dbm =
      cal.real("probe_reference_dbm", rc.probe_calibration.reference_dbm);
  rc.probe_calibration.reference_amp_ghz =
      cal.real("probe_reference_amp", rc.probe_calibration.reference_amp_ghz);
  if (!(spec.calibration.lever_ghz_per_flux > 0.0) || !(spec.calibration.drive_ghz_per_vrms > 0.0) ||
      !(rc.probe_calibration.reference_amp_ghz > 0.0)) {
    throw ConfigError(doc.source() + ": calibration constants must be > 0");
  }

  const Reader sys(doc, "system");
  SystemParams& p = spec.base;
  std::vector<std::string> defaulted;
  auto real_key = [&](const char* key, double& field) {
    if (sys.has(key)) field = sys.real(key, field);
    else defaulted.emplace_back(key);
  };
  auto exclusive = [&](const char* a, const char* b) {
    if (sys.has(a) && sys.has(b)) {
      sys.fail(b, *sys.get(b), std::string("cannot be combined with ") + a);
    }
  };
  exclusive("epsilon0", "flux_ratio");
  exclusive("probe_amp", "probe_power_dbm");
  exclusive("drive_amp", "drive_vrms");

  real_key("delta", p.delta);
  if (sys.has("flux_ratio")) p.epsilon0 = epsilon_from_flux(sys.real("flux_ratio", 0.5), spec.calibration);
  else real_key("epsilon0", p.epsilon0);
  real_key("resonator_freq", p.resonator_freq);
  real_key("coupling_g", p.coupling_g);
  if (sys.has("probe_power_dbm")) {
    p.probe_amp = probe_amp_from_power(sys.real("probe_power_dbm", 0.0), rc.probe_calibration);
  } else {
    real_key("probe_amp", p.probe_amp);
  }
  real_key("probe_freq", p.probe_freq);
  if (sys.has("drive_vrms")) p.drive_amp = drive_amp_from_vrms(sys.real("drive_vrms", 0.0), spec.calibration);
  else real_key("drive_amp", p.drive_amp);
  real_key("drive_freq", p.drive_freq);
  real_key("gamma1", p.gamma1);
  real_key("gamma2", p.gamma2);
  real_key("kappa", p.kappa);
  if (sys.has("fock_levels")) {
    const long n = sys.integer("fock_levels", 3);
    if (n < 2 || n > 64) sys.fail("fock_levels", *sys.get("fock_levels"), "must be in [2, 64]");
    p.fock_levels = static_cast<std::size_t>(n);
  } else {
    defaulted.emplace_back("fock_levels");
  }
  p.geometric_term = sys.boolean("geometric_term", p.geometric_term);
  if (!defaulted.empty()) {
    std::string list;
    for (const auto& k : defaulted) list += (list.empty() ? "" : ", ") + k;
    spdlog::info("{}: [system] keys not set, using reference defaults: {}", doc.source(), list);
  }
  try {
    p.validate();
  } catch (const SpecError& e) {
    throw ConfigError(doc.source() + ": [system] " + e.what());
  }

  const Reader sw(doc, "sweep");
  if (sw.has("mode")) {
    const auto m = parse_sweep_mode(sw.text("mode", ""));
    if (!m) sw.fail("mode", *sw.get("mode"), "expected static_steady_state or driven_periodic_average");
    spec.mode = *m;
    rc.has_mode = true;
  }
  if (sw.has("axis1")) {
    spec.axis1 = sw.axis("axis1");
    rc.has_axis1 = true;
  }
  if (sw.has("axis2")) {
    if (!rc.has_axis1) sw.fail("axis2", *sw.get("axis2"), "axis2 requires axis1");
    spec.axis2 = sw.axis("axis2");
  }
  if (sw.has("observables")) {
    spec.observables.clear();
    for (const auto& t : tokens(sw.text("observables", ""), true)) {
      const auto k = parse_observable(t);
      if (!k) sw.fail("observables", *sw.get("observables"), "unknown observable '" + t + "'");
      if (std::find(spec.observables.begin(), spec.observables.end(), *k) != spec.observables.end()) {
        sw.fail("observables", *sw.get("observables"), "observable '" + t + "' listed twice");
      }
      spec.observables.push_back(*k);
    }
    if (spec.observables.empty()) sw.fail("observables", *sw.get("observables"), "list is empty");
  }
  spec.solver.n_transient_periods =
      static_cast<int>(sw.integer("n_transient_periods", spec.solver.n_transient_periods));
  spec.solver.n_average_periods =
      static_cast<int>(sw.integer("n_average_periods", spec.solver.n_average_periods));
  spec.solver.samples_per_period =
      static_cast<int>(sw.integer("samples_per_period", spec.solver.samples_per_period));
  spec.solver.dt_max = sw.real("dt_max", spec.solver.dt_max);
  spec.transmission_scale = sw.real("transmission_scale", spec.transmission_scale);
  rc.g_multipliers = sw.reals("g_multipliers");

  const Reader out(doc, "output");
  rc.output_dir = out.text("directory", ".");
  spec.name = out.text("name", "run");
  if (spec.name.empty() || spec.name.find('/') != std::string::npos) {
    throw ConfigError(doc.source() + ": output.name must be a plain file stem");
  }
  return rc;
}

std::string serialize(const RunConfig& rc) {
  const SweepSpec& s = rc.sweep;
  const SystemParams& p = s.base;
  std::ostringstream o;
  o << "[system]\n"
    << "delta = " << num(p.delta) << '\n'
    << "epsilon0 = " << num(p.epsilon0) << '\n'
    << "resonator_freq = " << num(p.resonator_freq) << '\n'
    << "coupling_g = " << num(p.coupling_g) << '\n'
    << "probe_amp = " << num(p.probe_amp) << '\n'
    << "probe_freq = " << num(p.probe_freq) << '\n'
    << "drive_amp = " << num(p.drive_amp) << '\n'
    << "drive_freq = " << num(p.drive_freq) << '\n'
    << "gamma1 = " << num(p.gamma1) << '\n'
    << "gamma2 = " << num(p.gamma2) << '\n'
    << "kappa = " << num(p.kappa) << '\n'
    << "fock_levels = " << p.fock_levels << '\n'
    << "geometric_term = " << (p.geometric_term ? "true" : "false") << '\n';
  o << "\n[calibration]\n"
    << "lever_ghz_per_flux = " << num(s.calibration.lever_ghz_per_flux) << '\n'
    << "drive_ghz_per_vrms = " << num(s.calibration.drive_ghz_per_vrms) << '\n'
    << "probe_reference_dbm = " << num(rc.probe_calibration.reference_dbm) << '\n'
    << "probe_reference_amp = " << num(rc.probe_calibration.reference_amp_ghz) << '\n';
  o << "\n[sweep]\n";
  if (rc.has_mode) o << "mode = " << to_string(s.mode) << '\n';
  if (rc.has_axis1) o << "axis1 = " << axis_text(s.axis1) << '\n';
  if (s.axis2) o << "axis2 = " << axis_text(*s.axis2) << '\n';
  o << "observables = ";
  for (std::size_t k = 0; k < s.observables.size(); ++k) {
    o << (k ? ", " : "") << to_string(s.observables[k]);
  }
  o << '\n'
    << "n_transient_periods = " << s.solver.n_transient_periods << '\n'
    << "n_average_periods = " << s.solver.n_average_periods << '\n'
    << "samples_per_period = " << s.solver.samples_per_period << '\n'
    << "dt_max = " << num(s.solver.dt_max) << '\n'
    << "transmission_scale = " << num(s.transmission_scale) << '\n';
  if (!rc.g_multipliers.empty()) {
    o << "g_multipliers = ";
    for (std::size_t k = 0; k < rc.g_multipliers.size(); ++k) {
      o << (k ? ", " : "") << num(rc.g_multipliers[k]);
    }
    o << '\n';
  }
  o << "\n[output]\n"
    << "directory = " << rc.output_dir.string() << '\n'
    << "name = " << s.name << '\n';
  return o.str();
}

}  // namespace lzsm
