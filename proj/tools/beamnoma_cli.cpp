// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end for the beamspace NOMA simulator.  Talks to the
// shared library exclusively through its C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "beamnoma/beamnoma.h"

namespace {

constexpr const char* kUsage =
    "usage: beamnoma <command> [options]\n"
    "\n"
    "commands:\n"
    "  validate  parse the configuration and report whether it is usable\n"
    "  solve     run one algorithm on one scenario and print its report\n"
    "  sweep     run algorithms across an axis and emit a CSV table\n"
    "  trace     emit one solver's per-iteration convergence trace as CSV\n"
    "\n"
    "options:\n"
    "  --config <path>   configuration file (required)\n"
    "  --seed <int>      override the configured seed\n"
    "  --algo <list>     comma-separated algorithms: alg1,alg2,alg3,mf,sdma,tdma\n"
    "                    (solve and trace take exactly one)\n"
    "  --axis <name>     sweep axis: snr_db, k or n_t (default snr_db)\n"
    "  --values <list>   comma-separated axis values, strictly ascending\n"
    "  --out <path>      write output to this file instead of stdout\n"
    "  --threads <int>   worker threads for Monte Carlo evaluation (default 1)\n"
    "  --timing          fill the wall_time_ms column with real timings\n"
    "  --help            print this message\n";

struct Options {
  std::string command;
  std::string config_path;
  std::string algo_list;
  std::string axis = "snr_db";
  std::string values_list;
  std::string out_path;
  bool has_seed = false;
  uint64_t seed = 0;
  int threads = 1;
  bool timing = false;
};

[[noreturn]] void die(const std::string& message) {
  std::fprintf(stderr, "beamnoma: %s\n", message.c_str());
  std::exit(1);
}

[[noreturn]] void die_usage(const std::string& message) {
  std::fprintf(stderr, "beamnoma: %s\n\n%s", message.c_str(), kUsage);
  std::exit(2);
}

[[noreturn]] void die_api(const std::string& where) {
  std::fprintf(stderr, "beamnoma: %s: %s\n", where.c_str(), bn_last_error());
  std::exit(1);
}

std::vector<std::string> split_commas(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::size_t end = comma == std::string::npos ? list.size() : comma;
    if (end > start) out.push_back(list.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Options parse_options(int argc, char** argv) {
  Options opt;
  if (argc < 2) die_usage("missing command");
  opt.command = argv[1];
  if (opt.command == "--help" || opt.command == "-h") {
    std::fputs(kUsage, stdout);
    std::exit(0);
  }
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    const auto need_value = [&](const char* flag) -> std::string {
      if (i + 1 >= argc) die_usage(std::string(flag) + " needs a value");
      return argv[++i];
    };
    if (arg == "--config") {
      opt.config_path = need_value("--config");
    } else if (arg == "--seed") {
      const std::string v = need_value("--seed");
      char* end = nullptr;
      opt.seed = std::strtoull(v.c_str(), &end, 10);
      if (end == v.c_str() || *end != '\0') die_usage("--seed expects an integer");
      opt.has_seed = true;
    } else if (arg == "--algo") {
      opt.algo_list = need_value("--algo");
    } else if (arg == "--axis") {
      opt.axis = need_value("--axis");
    } else if (arg == "--values") {
      opt.values_list = need_value("--values");
    } else if (arg == "--out") {
      opt.out_path = need_value("--out");
    } else if (arg == "--threads") {
      const std::string v = need_value("--threads");
      opt.threads = std::atoi(v.c_str());
      if (opt.threads < 1) die_usage("--threads expects a positive integer");
    } else if (arg == "--timing") {
      opt.timing = true;
    } else if (arg == "--help" || arg == "-h") {
      std::fputs(kUsage, stdout);
      std::exit(0);
    } else {
      die_usage("unknown option '" + arg + "'");
    }
  }
  return opt;
}

bn_config* load_config(const Options& opt) {
  if (opt.config_path.empty()) die_usage("--config is required");
  bn_config* cfg = nullptr;
  if (bn_config_parse_file(opt.config_path.c_str(), &cfg) != BN_OK)
    die_api("loading " + opt.config_path);
  if (opt.has_seed && bn_config_set_seed(cfg, opt.seed) != BN_OK) die_api("setting seed");
  return cfg;
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::FILE* f = std::fopen(opt.out_path.c_str(), "wb");
  if (f == nullptr) die("cannot open output file: " + opt.out_path);
  const std::size_t written = std::fwrite(text.data(), 1, text.size(), f);
  const bool ok = written == text.size() && std::fclose(f) == 0;
  if (!ok) die("failed writing output file: " + opt.out_path);
}

int cmd_validate(const Options& opt) {
  bn_config* cfg = load_config(opt);
  std::printf("config OK: n_t=%d k=%d snr_db=%g mc_realizations=%d seed=%llu\n",
              bn_config_num_antennas(cfg), bn_config_num_ues(cfg), bn_config_snr_db(cfg),
              bn_config_mc_realizations(cfg),
              static_cast<unsigned long long>(bn_config_seed(cfg)));
  bn_config_free(cfg);
  return 0;
}

int cmd_solve(const Options& opt) {
  const std::vector<std::string> algos = split_commas(opt.algo_list);
  if (algos.size() != 1) die_usage("solve needs exactly one --algo");
  bn_config* cfg = load_config(opt);
  bn_scenario* scenario = nullptr;
  if (bn_scenario_build(cfg, &scenario) != BN_OK) die_api("building scenario");
  bn_result* result = nullptr;
  if (bn_run(cfg, scenario, algos[0].c_str(), opt.threads, opt.timing ? 1 : 0, &result) != BN_OK)
    die_api("running " + algos[0]);

  std::string text;
  char line[256];
  std::snprintf(line, sizeof line, "algorithm: %s\n", algos[0].c_str());
  text += line;
  std::snprintf(line, sizeof line, "clusters: %d\n", bn_scenario_num_clusters(scenario));
  text += line;
  std::snprintf(line, sizeof line, "weighted_sum_rate: %.12g\n",
                bn_result_weighted_sum_rate(result));
  text += line;
  std::snprintf(line, sizeof line, "sum_rate_stderr: %.12g\n", bn_result_sum_rate_stderr(result));
  text += line;
  std::snprintf(line, sizeof line, "upper_bound: %.12g\n", bn_result_upper_bound(result));
  text += line;
  std::snprintf(line, sizeof line, "outer_iters: %d\n", bn_result_outer_iters(result));
  text += line;
  std::snprintf(line, sizeof line, "converged: %s\n",
                bn_result_converged(result) ? "true" : "false");
  text += line;
  if (opt.timing) {
    std::snprintf(line, sizeof line, "wall_time_ms: %.3f\n", bn_result_wall_time_ms(result));
    text += line;
  }
  for (int u = 0; u < bn_result_num_ues(result); ++u) {
    std::snprintf(line, sizeof line, "ue_rate[%d]: %.12g\n", u, bn_result_ue_rate(result, u));
    text += line;
  }
  write_output(opt, text);

  bn_result_free(result);
  bn_scenario_free(scenario);
  bn_config_free(cfg);
  return 0;
}

int cmd_sweep(const Options& opt) {
  const std::vector<std::string> algos = split_commas(opt.algo_list);
  if (algos.empty()) die_usage("sweep needs --algo");
  if (opt.values_list.empty()) die_usage("sweep needs --values");
  std::vector<double> values;
  for (const std::string& v : split_commas(opt.values_list)) {
    char* end = nullptr;
    values.push_back(std::strtod(v.c_str(), &end));
    if (end == v.c_str() || *end != '\0') die_usage("--values expects numbers");
  }

  bn_config* cfg = load_config(opt);
  std::vector<const char*> algo_ptrs;
  algo_ptrs.reserve(algos.size());
  for (const std::string& a : algos) algo_ptrs.push_back(a.c_str());

  char* csv = nullptr;
  if (bn_sweep_csv(cfg, opt.axis.c_str(), values.data(), static_cast<int>(values.size()),
                   algo_ptrs.data(), static_cast<int>(algo_ptrs.size()), opt.threads,
                   opt.timing ? 1 : 0, &csv) != BN_OK)
    die_api("sweep");
  write_output(opt, csv);
  bn_string_free(csv);
  bn_config_free(cfg);
  return 0;
}

int cmd_trace(const Options& opt) {
  const std::vector<std::string> algos = split_commas(opt.algo_list);
  if (algos.size() != 1) die_usage("trace needs exactly one --algo");
  bn_config* cfg = load_config(opt);
  char* csv = nullptr;
  if (bn_trace_csv(cfg, algos[0].c_str(), &csv) != BN_OK) die_api("trace");
  write_output(opt, csv);
  bn_string_free(csv);
  bn_config_free(cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const Options opt = parse_options(argc, argv);
  if (opt.command == "validate") return cmd_validate(opt);
  if (opt.command == "solve") return cmd_solve(opt);
  if (opt.command == "sweep") return cmd_sweep(opt);
  if (opt.command == "trace") return cmd_trace(opt);
  die_usage("unknown command '" + opt.command + "'");
}
