// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration: a flat key/value document (optionally brace
// wrapped, entries split by newlines or commas, '#' comments) parsed into a
// validated ScenarioConfig with defaults applied.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/beamdesign.hpp"

namespace beamnoma {

// Parse failure with the 1-based line it occurred on.
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(int line, const std::string& what)
      : std::runtime_error("config line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ScenarioConfig {
  int n_t = 0;             // number of transmit antennas / base beams
  int k = 0;               // number of UEs
  double p_max_db = 0.0;   // power budget over unit noise, in dB
  double cell_radius_m = 50.0;
  int num_paths = 10;
  double angular_spread_deg = 5.0;
  double pathloss_exponent = 3.7;
  double path_decay = 0.5;
  std::vector<double> weights;  // empty means uniform (all 1)
  int num_sectors = 0;          // 0 means default to n_t
  int mc_realizations = 1000;
  std::uint64_t seed = 1;
  SolverConfig solver;

  bool has_n_t = false, has_k = false, has_p_max_db = false;

  double power_budget() const;  // linear P_max = 10^(p_max_db/10)
  int sectors() const { return num_sectors > 0 ? num_sectors : n_t; }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Parse and validate; unknown keys are rejected with their line number.
ScenarioConfig parse_scenario_config(const std::string& text);

// Read the file and parse; missing/unreadable file throws std::runtime_error.
ScenarioConfig load_scenario_config(const std::string& path);

}  // namespace beamnoma
