#include "cntpuf/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cntpuf/errors.hpp"

namespace cntpuf {

using nlohmann::json;

bool ProbeAccess::allows(LineRole role) const noexcept {
  switch (role) {
    case LineRole::DrainLine: return drain_lines;
    case LineRole::SourceLine: return source_lines;
    case LineRole::GateLine: return gate_line;
  }
  return false;
}

Crossbar Scenario::build() const {
  return build_crossbar(mix, n_rows, n_cols, crossbar_seed());
}

ThresholdRule Scenario::threshold_rule() const {
  return default_threshold_rule(mix, v_drive);
}

void Scenario::validate() const {
  if (n_rows < 1 || n_cols < 1) throw ConfigError("n_rows/n_cols: must be >= 1");
  mix.validate();
  if (v_drive == 0.0 || !std::isfinite(v_drive))
    throw ConfigError("v_drive: must be finite and nonzero");
  if (!std::isfinite(v_gate_on)) throw ConfigError("v_gate_on: must be finite");
  if (repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  if (readout_repetitions < 1)
    throw ConfigError("readout_repetitions: must be >= 1");
  if (enrollment_reads < 2) throw ConfigError("enrollment_reads: must be >= 2");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path.empty() ? what : path + ": " + what);
}

void check_known_keys(const json& obj, const std::set<std::string>& known,
                      const std::string& path) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      fail(path.empty() ? key : path + "." + key, "unknown key");
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& path,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + key, "expected an integer");
  return v.get<int>();
}

ParamRange get_range(const json& obj, const std::string& key, const std::string& path,
                     ParamRange fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(path + key, "expected [lower, upper]");
  return {v[0].get<double>(), v[1].get<double>()};
}

ClassRanges get_class_ranges(const json& obj, const std::string& key,
                             const std::string& path, ClassRanges fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_object()) fail(path + key, "expected an object");
  const std::string sub = path + key + ".";
  check_known_keys(v, {"g_on", "g_off", "g_gate"}, path + key);
  ClassRanges out;
  out.g_on = get_range(v, "g_on", sub, fallback.g_on);
  out.g_off = get_range(v, "g_off", sub, fallback.g_off);
  out.g_gate = get_range(v, "g_gate", sub, fallback.g_gate);
  return out;
}

json range_to_json(const ParamRange& r) { return json::array({r.lo, r.hi}); }

json class_ranges_to_json(const ClassRanges& r) {
  return json{{"g_on", range_to_json(r.g_on)},
              {"g_off", range_to_json(r.g_off)},
              {"g_gate", range_to_json(r.g_gate)}};
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("scenario must be a JSON object");

  check_known_keys(root,
                   {"n_rows", "n_cols", "seed", "noise_sigma", "v_drive",
                    "v_gate_on", "repetitions", "readout_repetitions",
                    "enrollment_reads", "probe_access", "mix"},
                   "");

  Scenario s;
  s.n_rows = get_int(root, "n_rows", "", s.n_rows);
  s.n_cols = get_int(root, "n_cols", "", s.n_cols);
  if (root.contains("seed")) {
    const json& v = root.at("seed");
    if (!v.is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    s.seed = v.get<std::uint64_t>();
  }
  s.v_drive = get_number(root, "v_drive", "", s.v_drive);
  s.v_gate_on = get_number(root, "v_gate_on", "", s.v_gate_on);
  s.repetitions = get_int(root, "repetitions", "", s.repetitions);
  s.readout_repetitions =
      get_int(root, "readout_repetitions", "", s.readout_repetitions);
  s.enrollment_reads = get_int(root, "enrollment_reads", "", s.enrollment_reads);
  s.mix.noise_sigma = get_number(root, "noise_sigma", "", s.mix.noise_sigma);

  if (root.contains("probe_access")) {
    const json& v = root.at("probe_access");
    if (!v.is_array()) fail("probe_access", "expected a list of line roles");
    s.probe_access = {false, false, false};
    for (const json& entry : v) {
      if (!entry.is_string()) fail("probe_access", "expected role names");
      const auto role = line_role_from_string(entry.get<std::string>());
      if (!role)
        fail("probe_access", "unknown line role '" + entry.get<std::string>() +
                                 "' (drain-lines, source-lines, gate-line)");
      switch (*role) {
        case LineRole::DrainLine: s.probe_access.drain_lines = true; break;
        case LineRole::SourceLine: s.probe_access.source_lines = true; break;
        case LineRole::GateLine: s.probe_access.gate_line = true; break;
      }
    }
  }

  if (root.contains("mix")) {
    const json& m = root.at("mix");
    if (!m.is_object()) fail("mix", "expected an object");
    check_known_keys(m,
                     {"p_metallic", "p_semiconducting", "p_insulating",
                      "metallic", "semiconducting", "insulating", "v_th",
                      "allow_off_range_overlap"},
                     "mix");
    s.mix.p_metallic = get_number(m, "p_metallic", "mix.", s.mix.p_metallic);
    s.mix.p_semiconducting =
        get_number(m, "p_semiconducting", "mix.", s.mix.p_semiconducting);
    s.mix.p_insulating = get_number(m, "p_insulating", "mix.", s.mix.p_insulating);
    s.mix.metallic = get_class_ranges(m, "metallic", "mix.", s.mix.metallic);
    s.mix.semiconducting =
        get_class_ranges(m, "semiconducting", "mix.", s.mix.semiconducting);
    s.mix.insulating = get_class_ranges(m, "insulating", "mix.", s.mix.insulating);
    s.mix.v_th = get_range(m, "v_th", "mix.", s.mix.v_th);
    if (m.contains("allow_off_range_overlap")) {
      const json& v = m.at("allow_off_range_overlap");
      if (!v.is_boolean()) fail("mix.allow_off_range_overlap", "expected a boolean");
      s.mix.allow_off_range_overlap = v.get<bool>();
    }
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& scenario) {
  json probe = json::array();
  if (scenario.probe_access.drain_lines) probe.push_back("drain-lines");
  if (scenario.probe_access.source_lines) probe.push_back("source-lines");
  if (scenario.probe_access.gate_line) probe.push_back("gate-line");

  const json root{
      {"n_rows", scenario.n_rows},
      {"n_cols", scenario.n_cols},
      {"seed", scenario.seed},
      {"noise_sigma", scenario.mix.noise_sigma},
      {"v_drive", scenario.v_drive},
      {"v_gate_on", scenario.v_gate_on},
      {"repetitions", scenario.repetitions},
      {"readout_repetitions", scenario.readout_repetitions},
      {"enrollment_reads", scenario.enrollment_reads},
      {"probe_access", probe},
      {"mix",
       {{"p_metallic", scenario.mix.p_metallic},
        {"p_semiconducting", scenario.mix.p_semiconducting},
        {"p_insulating", scenario.mix.p_insulating},
        {"metallic", class_ranges_to_json(scenario.mix.metallic)},
        {"semiconducting", class_ranges_to_json(scenario.mix.semiconducting)},
        {"insulating", class_ranges_to_json(scenario.mix.insulating)},
        {"v_th", range_to_json(scenario.mix.v_th)},
        {"allow_off_range_overlap", scenario.mix.allow_off_range_overlap}}},
  };
  return root.dump(2) + "\n";
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string canonical = serialize_scenario(scenario);
  std::uint64_t hash = 0xCBF29CE484222325ull;  // FNV-1a 64
  for (unsigned char byte : canonical) {
    hash ^= byte;
    hash *= 0x100000001B3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return hex;
}

AccessCheck check_probe_access(const Scenario& scenario, const BiasScheme& scheme) {
  const auto blocked = [&](LineRole role, const std::string& why) {
    AccessCheck check;
    check.permitted = false;
    check.blocked_reason =
        std::string(to_string(role)) + " not probeable but the scheme " + why;
    return check;
  };

  // Idle state is every line grounded; any line the scheme drives away from
  // 0 V must be reachable, as must every ammeter line.
  for (std::size_t r = 0; r < scheme.drain_v.size(); ++r)
    if (scheme.drain_v[r] != 0.0 && !scenario.probe_access.drain_lines)
      return blocked(LineRole::DrainLine,
                     "drives drain line " + std::to_string(r));
  for (std::size_t c = 0; c < scheme.source_v.size(); ++c)
    if (scheme.source_v[c] != 0.0 && !scenario.probe_access.source_lines)
      return blocked(LineRole::SourceLine,
                     "drives source line " + std::to_string(c));
  if (scheme.v_gate != 0.0 && !scenario.probe_access.gate_line)
    return blocked(LineRole::GateLine, "drives the gate line");

  for (const AmmeterEntry& entry : scheme.ammeter)
    if (!scenario.probe_access.allows(entry.line.role))
      return blocked(entry.line.role, "measures " +
                                          std::string(to_string(entry.line.role)));
  return {};
}

}  // namespace cntpuf
