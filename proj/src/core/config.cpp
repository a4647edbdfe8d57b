// SPDX-License-Identifier: Apache-2.0

#include "core/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace beamnoma {

namespace {

std::string trim(const std::string& s) {
  std::size_t first = 0, last = s.size();
  while (first < last && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(s[last - 1]))) --last;
  return s.substr(first, last - first);
}

double parse_double(const std::string& value, int line, const std::string& key) {
  const std::string v = trim(value);
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigParseError(line, "key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

long long parse_int(const std::string& value, int line, const std::string& key) {
  const std::string v = trim(value);
  long long out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigParseError(line, "key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t parse_uint(const std::string& value, int line, const std::string& key) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigParseError(line,
                           "key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return out;
}

std::vector<double> parse_weights(const std::string& value, int line) {
  const std::string v = trim(value);
  if (v == "uniform") return {};
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, line, "weights"));
  if (out.empty()) throw ConfigParseError(line, "key 'weights': empty list");
  return out;
}

void apply_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                 int line) {
  if (key == "n_t") {
    cfg.n_t = static_cast<int>(parse_int(value, line, key));
    cfg.has_n_t = true;
  } else if (key == "k") {
    cfg.k = static_cast<int>(parse_int(value, line, key));
    cfg.has_k = true;
  } else if (key == "p_max_db") {
    cfg.p_max_db = parse_double(value, line, key);
    cfg.has_p_max_db = true;
  } else if (key == "cell_radius_m") {
    cfg.cell_radius_m = parse_double(value, line, key);
  } else if (key == "num_paths") {
    cfg.num_paths = static_cast<int>(parse_int(value, line, key));
  } else if (key == "angular_spread_deg") {
    cfg.angular_spread_deg = parse_double(value, line, key);
  } else if (key == "pathloss_exponent") {
    cfg.pathloss_exponent = parse_double(value, line, key);
  } else if (key == "path_decay") {
    cfg.path_decay = parse_double(value, line, key);
  } else if (key == "weights") {
    cfg.weights = parse_weights(value, line);
  } else if (key == "num_sectors") {
    cfg.num_sectors = static_cast<int>(parse_int(value, line, key));
  } else if (key == "mc_realizations" || key == "mc") {
    cfg.mc_realizations = static_cast<int>(parse_int(value, line, key));
  } else if (key == "seed") {
    cfg.seed = parse_uint(value, line, key);
  } else if (key == "max_outer_iters") {
    cfg.solver.max_outer_iters = static_cast<int>(parse_int(value, line, key));
  } else if (key == "max_inner_iters") {
    cfg.solver.max_inner_iters = static_cast<int>(parse_int(value, line, key));
  } else if (key == "outer_tol") {
    cfg.solver.outer_tol = parse_double(value, line, key);
  } else if (key == "multiplier_tol") {
    cfg.solver.multiplier_tol = parse_double(value, line, key);
  } else if (key == "step_mu") {
    cfg.solver.step_mu = parse_double(value, line, key);
  } else if (key == "step_mu2") {
    cfg.solver.step_mu2 = parse_double(value, line, key);
  } else if (key == "step_omega") {
    cfg.solver.step_omega = parse_double(value, line, key);
  } else if (key == "initial_multiplier") {
    cfg.solver.initial_multiplier = parse_double(value, line, key);
  } else {
    throw ConfigParseError(line, "unknown key '" + key + "'");
  }
}

}  // namespace

double ScenarioConfig::power_budget() const { return std::pow(10.0, p_max_db / 10.0); }

void ScenarioConfig::validate() const {
  if (!has_n_t) throw std::invalid_argument("config: missing required key 'n_t'");
  if (!has_k) throw std::invalid_argument("config: missing required key 'k'");
  if (!has_p_max_db) throw std::invalid_argument("config: missing required key 'p_max_db'");
  if (n_t < 2) throw std::invalid_argument("config: n_t must be >= 2");
  if (k < 1) throw std::invalid_argument("config: k must be >= 1");
  if (!(cell_radius_m > 0.0)) throw std::invalid_argument("config: cell_radius_m must be > 0");
  if (num_paths < 1) throw std::invalid_argument("config: num_paths must be >= 1");
  if (!(angular_spread_deg >= 0.0))
    throw std::invalid_argument("config: angular_spread_deg must be >= 0");
  if (!(pathloss_exponent >= 0.0))
    throw std::invalid_argument("config: pathloss_exponent must be >= 0");
  if (!(path_decay >= 0.0)) throw std::invalid_argument("config: path_decay must be >= 0");
  if (!weights.empty()) {
    if (static_cast<int>(weights.size()) != k)
      throw std::invalid_argument("config: weights must list exactly k values");
    for (double w : weights)
      if (!(w > 0.0)) throw std::invalid_argument("config: weights must all be > 0");
  }
  if (num_sectors != 0 && (num_sectors < 1 || num_sectors > n_t))
    throw std::invalid_argument("config: num_sectors must be between 1 and n_t");
  if (mc_realizations < 1)
    throw std::invalid_argument("config: mc_realizations must be >= 1");
  solver.validate();
}

ScenarioConfig parse_scenario_config(const std::string& text) {
  ScenarioConfig cfg;
  std::stringstream stream(text);
  std::string raw;
  int line_no = 0;
  bool saw_open_brace = false;
  bool saw_close_brace = false;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (saw_close_brace && !line.empty())
      throw ConfigParseError(line_no, "content after closing '}'");
    if (!saw_open_brace && !line.empty() && line.front() == '{') {
      saw_open_brace = true;
      line = trim(line.substr(1));
    }
    if (saw_open_brace && !line.empty() && line.back() == '}') {
      saw_close_brace = true;
      line.pop_back();
      line = trim(line);
    }
    if (line.empty()) continue;

    // Entries split on commas; a piece without a colon continues the previous
    // value (so weight lists may use commas too).
    std::vector<std::string> entries;
    std::stringstream parts(line);
    std::string piece;
    while (std::getline(parts, piece, ',')) {
      if (piece.find(':') == std::string::npos && !entries.empty())
        entries.back() += "," + piece;
      else
        entries.push_back(piece);
    }
    for (const std::string& entry : entries) {
      const std::string e = trim(entry);
      if (e.empty()) continue;
      const std::size_t colon = e.find(':');
      if (colon == std::string::npos)
        throw ConfigParseError(line_no, "expected 'key: value', got '" + e + "'");
      const std::string key = trim(e.substr(0, colon));
      const std::string value = trim(e.substr(colon + 1));
      if (key.empty()) throw ConfigParseError(line_no, "empty key");
      if (value.empty()) throw ConfigParseError(line_no, "key '" + key + "': empty value");
      apply_entry(cfg, key, value, line_no);
    }
  }
  if (saw_open_brace && !saw_close_brace)
    throw ConfigParseError(line_no, "missing closing '}'");
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_config(buffer.str());
}

}  // namespace beamnoma
