// Scenario file parsing: a small TOML-style key/value format with [scenario]
// and [run] sections, a strict schema, and units baked into key names.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfmatch/scenario.hpp"
#include "bfmatch/transmission.hpp"

namespace bfmatch {

struct RunOptions {
  int grid_points = 2001;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::vector<Strategy> strategies = {Strategy::optimal,         Strategy::frequency_flat,
                                      Strategy::conjugate_match, Strategy::ladder,
                                      Strategy::ideal,           Strategy::no_match};
  int ladder_order = 4;
  int rational_fit_order = 4;
  double rational_fit_tol = 1e-3;
  std::vector<double> sweep_bandwidths;  // Hz; empty unless a sweep is requested
};

struct ScenarioFileData {
  ScenarioConfig scenario;
  RunOptions run;
};

class ScenarioFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "optimal") return Strategy::optimal;
  if (s == "frequency_flat") return Strategy::frequency_flat;
  if (s == "conjugate_match") return Strategy::conjugate_match;
  if (s == "ladder") return Strategy::ladder;
  if (s == "ideal") return Strategy::ideal;
  if (s == "no_match") return Strategy::no_match;
  throw ScenarioFileError("unknown strategy '" + s + "'");
}

inline BeamMode mode_from_string(const std::string& s) {
  if (s == "single") return BeamMode::single;
  if (s == "even") return BeamMode::even;
  if (s == "odd") return BeamMode::odd;
  throw ScenarioFileError("unknown mode '" + s + "' (expected single, even, or odd)");
}

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

struct KeyValue {
  std::string value;
  size_t line;
};

inline double parse_number(const KeyValue& kv, const std::string& name, const std::string& key) {
  std::istringstream is(kv.value);
  double v;
  if (!(is >> v) || !(is >> std::ws).eof())
    throw ScenarioFileError(name + ":" + std::to_string(kv.line) + ": key '" + key +
                            "' expects a number, got '" + kv.value + "'");
  return v;
}

inline std::vector<std::string> parse_list(std::string v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> items;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = unquote(trim(item));
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace detail

inline ScenarioFileData parse_scenario_file(std::istream& in, const std::string& name = "<stream>") {
  using detail::KeyValue;
  std::map<std::string, std::map<std::string, KeyValue>> sections;
  std::string line, section;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments, respecting quoted strings
    bool in_quote = false;
    char quote = 0;
    for (size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (in_quote) {
        if (ch == quote) in_quote = false;
      } else if (ch == '"' || ch == '\'') {
        in_quote = true;
        quote = ch;
      } else if (ch == '#') {
        line.erase(i);
        break;
      }
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ScenarioFileError(name + ":" + std::to_string(line_no) + ": malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "run")
        throw ScenarioFileError(name + ":" + std::to_string(line_no) + ": unknown section [" +
                                section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioFileError(name + ":" + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      throw ScenarioFileError(name + ":" + std::to_string(line_no) +
                              ": key outside of a [section]");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::unquote(detail::trim(line.substr(eq + 1)));
    if (key.empty())
      throw ScenarioFileError(name + ":" + std::to_string(line_no) + ": empty key");
    if (sections[section].count(key))
      throw ScenarioFileError(name + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                              "'");
    sections[section][key] = {value, line_no};
  }

  static const std::vector<std::string> scenario_keys = {
      "mode",          "f_c_hz",        "bandwidth_hz",      "antenna_radius_m",
      "resistance_ohm", "z0_ohm",       "element_spacing_m", "theta_rad",
      "es_w_per_hz",   "total_power_w", "n0_w_per_hz",       "gain",
      "d_txrx_m",      "speed_of_light_m_per_s"};
  static const std::vector<std::string> run_keys = {
      "grid_points",        "tol",  "seed",    "out_dir", "strategies", "ladder_order",
      "rational_fit_order", "rational_fit_tol", "sweep_bandwidths_hz"};
  for (const auto& [sec, kvs] : sections) {
    const auto& allowed = sec == "scenario" ? scenario_keys : run_keys;
    for (const auto& [key, kv] : kvs)
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ScenarioFileError(name + ":" + std::to_string(kv.line) + ": unknown key '" + key +
                                "' in section [" + sec + "]");
  }

  auto& sc = sections["scenario"];
  auto& rn = sections["run"];
  auto num = [&](auto& sec, const std::string& key, double dflt) {
    const auto it = sec.find(key);
    return it == sec.end() ? dflt : detail::parse_number(it->second, name, key);
  };
  auto has = [&](auto& sec, const std::string& key) { return sec.count(key) > 0; };

  ScenarioFileData out;
  const BeamMode mode = has(sc, "mode") ? mode_from_string(sc.at("mode").value) : BeamMode::single;
  const double bandwidth = num(sc, "bandwidth_hz", 4.2e9);
  if (!(bandwidth > 0.0)) throw ScenarioFileError(name + ": bandwidth_hz must be positive");
  out.run.grid_points = static_cast<int>(num(rn, "grid_points", 2001));

  ScenarioConfig cfg = mode == BeamMode::single
                           ? single_chu_scenario(bandwidth, out.run.grid_points)
                           : two_chu_scenario(mode, bandwidth, out.run.grid_points);
  if (has(sc, "f_c_hz")) {
    cfg.f_c = num(sc, "f_c_hz", cfg.f_c);
    cfg.f_min = cfg.f_c - bandwidth / 2.0;
    cfg.f_max = cfg.f_c + bandwidth / 2.0;
    if (mode != BeamMode::single && !has(sc, "antenna_radius_m")) cfg.a = cfg.lambda_c() / 15.0;
    if (mode != BeamMode::single && !has(sc, "element_spacing_m")) cfg.d = cfg.lambda_c() / 2.0;
  }
  cfg.a = num(sc, "antenna_radius_m", cfg.a);
  cfg.R = num(sc, "resistance_ohm", cfg.R);
  cfg.z0 = num(sc, "z0_ohm", cfg.z0);
  cfg.d = num(sc, "element_spacing_m", cfg.d);
  cfg.theta = num(sc, "theta_rad", cfg.theta);
  cfg.n_0 = num(sc, "n0_w_per_hz", cfg.n_0);
  cfg.gain = num(sc, "gain", cfg.gain);
  cfg.d_txrx = num(sc, "d_txrx_m", cfg.d_txrx);
  cfg.c = num(sc, "speed_of_light_m_per_s", cfg.c);
  if (has(sc, "total_power_w")) cfg.e_s = num(sc, "total_power_w", kTotalPowerW) / bandwidth;
  if (has(sc, "es_w_per_hz")) cfg.e_s = num(sc, "es_w_per_hz", cfg.e_s);
  cfg.validate();
  out.scenario = cfg;

  out.run.tol = num(rn, "tol", out.run.tol);
  out.run.seed = static_cast<std::uint64_t>(num(rn, "seed", 0.0));
  if (has(rn, "out_dir")) out.run.out_dir = rn.at("out_dir").value;
  out.run.ladder_order = static_cast<int>(num(rn, "ladder_order", out.run.ladder_order));
  out.run.rational_fit_order =
      static_cast<int>(num(rn, "rational_fit_order", out.run.rational_fit_order));
  out.run.rational_fit_tol = num(rn, "rational_fit_tol", out.run.rational_fit_tol);
  if (has(rn, "strategies")) {
    out.run.strategies.clear();
    for (const auto& s : detail::parse_list(rn.at("strategies").value))
      out.run.strategies.push_back(strategy_from_string(s));
  }
  if (has(rn, "sweep_bandwidths_hz")) {
    for (const auto& s : detail::parse_list(rn.at("sweep_bandwidths_hz").value)) {
      std::istringstream is(s);
      double v;
      if (!(is >> v) || !(is >> std::ws).eof())
        throw ScenarioFileError(name + ": sweep_bandwidths_hz entry '" + s + "' is not a number");
      out.run.sweep_bandwidths.push_back(v);
    }
  }
  return out;
}

inline ScenarioFileData load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioFileError(path + ": cannot open file");
  return parse_scenario_file(in, path);
}

}  // namespace bfmatch
