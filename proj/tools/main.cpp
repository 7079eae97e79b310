// tmapf command line: solve single instances, run benchmark batches,
// generate maps/scenarios, and certify solution files. Talks to the solver
// library exclusively through its C interface.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmapf/tmapf.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitAllTimedOut = 4;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitConfig, "cannot read " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitConfig, "cannot write " + path};
  out << content;
}

void check(tmapf_status st) {
  if (st == TMAPF_OK) return;
  const int code = st == TMAPF_ERR_PARSE || st == TMAPF_ERR_CONFIG ||
                           st == TMAPF_ERR_INVALID_ARG
                       ? kExitConfig
                       : 1;
  throw CliError{code, tmapf_last_error()};
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  tmapf_string_free(s);
  return out;
}

struct ProblemHandle {
  tmapf_problem* p = nullptr;
  ~ProblemHandle() { tmapf_problem_free(p); }
};

struct ResultHandle {
  tmapf_result* r = nullptr;
  ~ResultHandle() { tmapf_result_free(r); }
};

// common flags for solve/oracle/bench
struct RunOpts {
  std::string map_path, scen_path, out_path;
  std::string algo = "tfcbs";
  std::string cost = "cost1";
  double timeout_secs = 300;
  uint64_t seed = 0;
  bool validate = false;
};

int cmd_solve(const RunOpts& o) {
  ProblemHandle prob;
  check(tmapf_problem_parse(read_file(o.map_path).c_str(),
                            read_file(o.scen_path).c_str(), &prob.p));
  json opts = {{"algo", o.algo},
               {"cost", o.cost},
               {"timeout_secs", o.timeout_secs},
               {"seed", o.seed}};
  ResultHandle res;
  check(tmapf_solve(prob.p, opts.dump().c_str(), &res.r));
  char* doc = nullptr;
  check(tmapf_result_json(res.r, &doc));
  const std::string text = take_string(doc);
  if (!o.out_path.empty()) write_file(o.out_path, text);

  const std::string outcome = tmapf_result_outcome(res.r);
  long long cost = -1;
  tmapf_result_cost(res.r, &cost);
  std::cerr << "outcome: " << outcome;
  if (outcome == "solved") std::cerr << "  cost: " << cost;
  std::cerr << "\n";
  if (o.out_path.empty()) std::cout << text;

  if (outcome == "solved" && o.validate) {
    char* report = nullptr;
    check(tmapf_certify(prob.p, text.c_str(), nullptr, &report));
    const json rep = json::parse(take_string(report));
    if (!rep.at("ok").get<bool>()) {
      std::cerr << "validation failed\n";
      return kExitValidation;
    }
  }
  if (outcome == "timeout") return kExitAllTimedOut;
  return kExitOk;
}

int cmd_oracle(const RunOpts& o, const std::string& mode, long long cap) {
  ProblemHandle prob;
  check(tmapf_problem_parse(read_file(o.map_path).c_str(),
                            read_file(o.scen_path).c_str(), &prob.p));
  json opts = {{"cost", o.cost}, {"state_cap", cap}};
  if (!mode.empty()) opts["mode"] = mode;
  ResultHandle res;
  check(tmapf_oracle(prob.p, opts.dump().c_str(), &res.r));
  char* doc = nullptr;
  check(tmapf_result_json(res.r, &doc));
  const std::string text = take_string(doc);
  const std::string outcome = tmapf_result_outcome(res.r);
  long long cost = -1;
  tmapf_result_cost(res.r, &cost);
  std::cerr << "outcome: " << outcome;
  if (outcome == "solved") std::cerr << "  optimal cost: " << cost;
  std::cerr << "\n";
  if (!o.out_path.empty())
    write_file(o.out_path, text);
  else
    std::cout << text;
  return kExitOk;
}

int cmd_certify(const RunOpts& o, const std::string& sol_path,
                const std::string& mode) {
  ProblemHandle prob;
  check(tmapf_problem_parse(read_file(o.map_path).c_str(),
                            read_file(o.scen_path).c_str(), &prob.p));
  char* report = nullptr;
  check(tmapf_certify(prob.p, read_file(sol_path).c_str(),
                      mode.empty() ? nullptr : mode.c_str(), &report));
  const std::string text = take_string(report);
  std::cout << text;
  const json rep = json::parse(text);
  return rep.at("ok").get<bool>() ? kExitOk : kExitValidation;
}

int cmd_bench(const RunOpts& o, const std::vector<std::string>& scen_paths,
              const std::vector<std::string>& algos, int jobs) {
  json cfg;
  cfg["map"] = read_file(o.map_path);
  json scens = json::array();
  for (const auto& path : scen_paths) {
    std::string name = path;
    const auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
    scens.push_back({{"name", name}, {"text", read_file(path)}});
  }
  cfg["scenarios"] = std::move(scens);
  cfg["algos"] = algos;
  cfg["cost"] = o.cost;
  cfg["timeout_secs"] = o.timeout_secs;
  cfg["seed"] = o.seed;
  cfg["validate"] = o.validate;
  cfg["jobs"] = jobs;

  char* csv = nullptr;
  char* summary = nullptr;
  check(tmapf_bench(cfg.dump().c_str(), &csv, &summary));
  const std::string csv_text = take_string(csv);
  const std::string summary_text = take_string(summary);
  const std::string prefix = o.out_path.empty() ? "bench" : o.out_path;
  write_file(prefix + ".csv", csv_text);
  write_file(prefix + ".summary.json", summary_text);
  std::cerr << "wrote " << prefix << ".csv and " << prefix
            << ".summary.json\n";
  std::cout << summary_text;

  const json rep = json::parse(summary_text);
  if (rep.value("validation_failures", 0) > 0) return kExitValidation;
  if (rep.value("all_timed_out", false)) return kExitAllTimedOut;
  return kExitOk;
}

int cmd_gen_map(const std::string& profile, int width, int height,
                int movables_per_row, uint64_t seed,
                const std::string& out_path) {
  json opts = {{"profile", profile}, {"seed", seed}};
  if (profile == "custom") {
    opts["width"] = width;
    opts["height"] = height;
    opts["movables_per_row"] = movables_per_row;
  }
  char* text = nullptr;
  check(tmapf_generate_map(opts.dump().c_str(), &text));
  const std::string map = take_string(text);
  if (!out_path.empty())
    write_file(out_path, map);
  else
    std::cout << map;
  return kExitOk;
}

int cmd_gen_scen(const RunOpts& o, int tasks, int movers,
                 const std::string& policy) {
  json opts = {{"tasks", tasks},
               {"movers", movers},
               {"seed", o.seed},
               {"mover_start_policy", policy}};
  char* text = nullptr;
  check(tmapf_generate_scenario(read_file(o.map_path).c_str(),
                                opts.dump().c_str(), &text));
  const std::string scen = take_string(text);
  if (!o.out_path.empty())
    write_file(o.out_path, scen);
  else
    std::cout << scen;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAPF / terraforming-MAPF solver suite"};
  app.require_subcommand(1);

  RunOpts o;
  std::string sol_path, mode, policy = "under-shelf", profile = "small";
  std::vector<std::string> scen_paths, algos{"tfcbs"};
  long long state_cap = 1000000;
  int jobs = 1, tasks = 1, movers = 0;
  int width = 0, height = 0, movables_per_row = 1;

  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("--map", o.map_path)->required();
  solve->add_option("--scen", o.scen_path)->required();
  solve->add_option("--algo", o.algo, "cbs|pbs|tfcbs|tfpbs");
  solve->add_option("--cost", o.cost, "cost1|cost2");
  solve->add_option("--timeout-secs", o.timeout_secs);
  solve->add_option("--seed", o.seed);
  solve->add_option("--out", o.out_path, "solution file path");
  solve->add_flag("--validate", o.validate);

  auto* bench = app.add_subcommand("bench", "run a batch of cells");
  bench->add_option("--map", o.map_path)->required();
  bench->add_option("--scen", scen_paths, "scenario files")->required();
  bench->add_option("--algo", algos, "algorithms to compare");
  bench->add_option("--cost", o.cost);
  bench->add_option("--timeout-secs", o.timeout_secs);
  bench->add_option("--seed", o.seed);
  bench->add_option("--out", o.out_path, "report path prefix");
  bench->add_option("--jobs", jobs, "parallel cells");
  bench->add_flag("--validate", o.validate);

  auto* gen_map = app.add_subcommand("gen-map", "emit a warehouse map");
  gen_map->add_option("--profile", profile, "small|large|custom");
  gen_map->add_option("--width", width);
  gen_map->add_option("--height", height);
  gen_map->add_option("--movables-per-row", movables_per_row);
  gen_map->add_option("--seed", o.seed);
  gen_map->add_option("--out", o.out_path);

  auto* gen_scen = app.add_subcommand("gen-scen", "emit a random scenario");
  gen_scen->add_option("--map", o.map_path)->required();
  gen_scen->add_option("--tasks", tasks)->required();
  gen_scen->add_option("--movers", movers);
  gen_scen->add_option("--seed", o.seed);
  gen_scen->add_option("--mover-start-policy", policy,
                       "under-shelf|uniform-free");
  gen_scen->add_option("--out", o.out_path);

  auto* certify = app.add_subcommand("certify", "validate a solution file");
  certify->add_option("--map", o.map_path)->required();
  certify->add_option("--scen", o.scen_path)->required();
  certify->add_option("--solution", sol_path)->required();
  certify->add_option("--mode", mode, "mapf|tmapf");

  auto* oracle = app.add_subcommand("oracle", "brute-force optimum");
  oracle->add_option("--map", o.map_path)->required();
  oracle->add_option("--scen", o.scen_path)->required();
  oracle->add_option("--mode", mode, "mapf|tmapf");
  oracle->add_option("--cost", o.cost, "soc|cost1|cost2");
  oracle->add_option("--state-cap", state_cap);
  oracle->add_option("--out", o.out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (bench->parsed()) return cmd_bench(o, scen_paths, algos, jobs);
    if (gen_map->parsed())
      return cmd_gen_map(profile, width, height, movables_per_row, o.seed,
                         o.out_path);
    if (gen_scen->parsed()) return cmd_gen_scen(o, tasks, movers, policy);
    if (certify->parsed()) return cmd_certify(o, sol_path, mode);
    if (oracle->parsed()) return cmd_oracle(o, mode, state_cap);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
