#include "tmapf/tmapf.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "tmapf/bench.hpp"
#include "tmapf/io.hpp"
#include "tmapf/oracle.hpp"
#include "tmapf/solver.hpp"

using json = nlohmann::json;

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
tmapf_status wrap(Fn&& fn) {
  try {
    return fn();
  } catch (const tmapf::ParseError& e) {
    g_last_error = e.what();
    return TMAPF_ERR_PARSE;
  } catch (const tmapf::ConfigError& e) {
    g_last_error = e.what();
    return TMAPF_ERR_CONFIG;
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return TMAPF_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TMAPF_ERR_INTERNAL;
  }
}

json parse_options(const char* options_json) {
  if (options_json == nullptr || options_json[0] == '\0')
    return json::object();
  return json::parse(options_json);
}

}  // namespace

struct tmapf_problem {
  tmapf::Problem prob;
};

struct tmapf_result {
  tmapf::Problem prob;  // with the assignment the run used
  tmapf::SolveResult res;
  std::string algorithm;
  std::string cost_function;
  uint64_t seed = 0;
  std::string outcome;
};

extern "C" {

const char* tmapf_version(void) { return "1.0.0"; }

const char* tmapf_last_error(void) { return g_last_error.c_str(); }

void tmapf_string_free(char* s) { delete[] s; }

tmapf_status tmapf_problem_parse(const char* map_text, const char* scen_text,
                                 tmapf_problem** out) {
  if (!map_text || !scen_text || !out) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    auto* p = new tmapf_problem{tmapf::load_problem(map_text, scen_text)};
    *out = p;
    return TMAPF_OK;
  });
}

void tmapf_problem_free(tmapf_problem* p) { delete p; }

tmapf_status tmapf_solve(const tmapf_problem* p, const char* options_json,
                         tmapf_result** out) {
  if (!p || !out) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    const json opts = parse_options(options_json);
    const std::string algo_s = opts.value("algo", "tfcbs");
    auto algo = tmapf::algo_from_string(algo_s);
    if (!algo) throw tmapf::ConfigError("unknown algorithm '" + algo_s + "'");
    const std::string cost_s = opts.value("cost", "cost1");
    auto cost = tmapf::cost_from_string(cost_s);
    if (!cost) throw tmapf::ConfigError("unknown cost function '" + cost_s + "'");

    tmapf::SolveConfig cfg;
    cfg.cost = *cost;
    cfg.timeout_secs = opts.value("timeout_secs", 300.0);
    cfg.seed = opts.value("seed", (uint64_t)0);

    tmapf::Problem prob = p->prob;
    const bool is_static =
        *algo == tmapf::Algo::cbs || *algo == tmapf::Algo::pbs;
    if (is_static) prob = prob.to_static();
    if (!is_static && !prob.assignment && prob.num_movers() > 0)
      prob.assignment = tmapf::assign_movers(prob);

    auto* r = new tmapf_result;
    r->prob = prob;
    if (is_static) r->prob.assignment = std::vector<int>{};
    r->res = tmapf::solve(r->prob, *algo, cfg);
    r->algorithm = tmapf::to_string(*algo);
    r->cost_function = tmapf::to_string(
        is_static ? tmapf::CostFn::soc : *cost);
    r->seed = cfg.seed;
    r->outcome = tmapf::to_string(r->res.outcome);
    *out = r;
    return TMAPF_OK;
  });
}

tmapf_status tmapf_oracle(const tmapf_problem* p, const char* options_json,
                          tmapf_result** out) {
  if (!p || !out) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    const json opts = parse_options(options_json);
    const std::string mode_s =
        opts.value("mode", p->prob.is_mapf() ? "mapf" : "tmapf");
    const tmapf::Mode mode =
        mode_s == "mapf" ? tmapf::Mode::mapf : tmapf::Mode::tmapf;
    const std::string cost_s =
        opts.value("cost", mode == tmapf::Mode::mapf ? "soc" : "cost1");
    auto cost = tmapf::cost_from_string(cost_s);
    if (!cost) throw tmapf::ConfigError("unknown cost function '" + cost_s + "'");
    const long long cap = opts.value("state_cap", (long long)1000000);

    tmapf::Problem prob = p->prob;
    if (mode == tmapf::Mode::mapf) prob = prob.to_static();
    if (!prob.assignment)
      prob.assignment = prob.num_movers() > 0 ? tmapf::assign_movers(prob)
                                              : std::vector<int>{};

    auto oracle = tmapf::brute_force_optimal(prob, mode, *cost, cap);
    auto* r = new tmapf_result;
    r->prob = prob;
    r->algorithm = "oracle";
    r->cost_function = cost_s;
    r->seed = 0;
    switch (oracle.status) {
      case tmapf::OracleResult::Status::optimal:
        r->res.outcome = tmapf::Outcome::solved;
        r->res.cost = oracle.cost;
        r->res.solution = oracle.witness;
        break;
      case tmapf::OracleResult::Status::infeasible:
        r->res.outcome = tmapf::Outcome::infeasible;
        break;
      case tmapf::OracleResult::Status::cap_exceeded:
        r->res.outcome = tmapf::Outcome::cap_exceeded;
        break;
    }
    r->res.stats.ll_expansions = oracle.states_explored;
    r->outcome = tmapf::to_string(r->res.outcome);
    *out = r;
    return TMAPF_OK;
  });
}

const char* tmapf_result_outcome(const tmapf_result* r) {
  return r ? r->outcome.c_str() : "";
}

tmapf_status tmapf_result_cost(const tmapf_result* r, long long* out) {
  if (!r || !out) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  *out = r->res.cost;
  return TMAPF_OK;
}

tmapf_status tmapf_result_json(const tmapf_result* r, char** out) {
  if (!r || !out) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    *out = dup_string(tmapf::solution_to_json(r->prob, r->res, r->algorithm,
                                              r->cost_function, r->seed));
    return TMAPF_OK;
  });
}

void tmapf_result_free(tmapf_result* r) { delete r; }

tmapf_status tmapf_certify(const tmapf_problem* p, const char* solution_json,
                           const char* mode, char** report_json) {
  if (!p || !solution_json || !report_json) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    std::string mode_s = mode ? mode : "";
    if (mode_s.empty()) mode_s = p->prob.is_mapf() ? "mapf" : "tmapf";
    const tmapf::Mode m =
        mode_s == "mapf" ? tmapf::Mode::mapf : tmapf::Mode::tmapf;
    tmapf::Problem prob = p->prob;
    if (m == tmapf::Mode::mapf && !prob.is_mapf()) prob = prob.to_static();
    if (!prob.assignment)
      prob.assignment = prob.num_movers() > 0 ? tmapf::assign_movers(prob)
                                              : std::vector<int>{};
    auto sol = tmapf::solution_from_json(prob.graph, solution_json);
    auto cert = tmapf::certify(prob, sol, m);
    json doc;
    doc["ok"] = cert.ok;
    json vs = json::array();
    for (const auto& v : cert.violations)
      vs.push_back({{"rule", v.rule}, {"time", v.time}, {"detail", v.detail}});
    doc["violations"] = std::move(vs);
    *report_json = dup_string(doc.dump(2) + "\n");
    return TMAPF_OK;
  });
}

tmapf_status tmapf_generate_map(const char* options_json, char** map_text) {
  if (!map_text) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    const json opts = parse_options(options_json);
    const std::string profile_s = opts.value("profile", "small");
    tmapf::WarehouseProfile profile;
    if (profile_s == "small") {
      profile = tmapf::WarehouseProfile::small();
    } else if (profile_s == "large") {
      profile = tmapf::WarehouseProfile::large();
    } else if (profile_s == "custom") {
      profile = tmapf::WarehouseProfile::custom(
          opts.value("width", 0), opts.value("height", 0),
          opts.value("movables_per_row", 1));
    } else {
      throw tmapf::ConfigError("unknown profile '" + profile_s + "'");
    }
    const uint64_t seed = opts.value("seed", (uint64_t)0);
    *map_text = dup_string(tmapf::generate_warehouse(profile, seed));
    return TMAPF_OK;
  });
}

tmapf_status tmapf_generate_scenario(const char* map_text,
                                     const char* options_json,
                                     char** scen_text) {
  if (!map_text || !scen_text) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    const json opts = parse_options(options_json);
    const int tasks = opts.value("tasks", 1);
    const int movers = opts.value("movers", 0);
    const uint64_t seed = opts.value("seed", (uint64_t)0);
    const std::string policy_s =
        opts.value("mover_start_policy", "under-shelf");
    tmapf::MoverStartPolicy policy;
    if (policy_s == "under-shelf")
      policy = tmapf::MoverStartPolicy::under_shelf;
    else if (policy_s == "uniform-free")
      policy = tmapf::MoverStartPolicy::uniform_free;
    else
      throw tmapf::ConfigError("unknown mover start policy '" + policy_s + "'");
    *scen_text = dup_string(
        tmapf::generate_scenario(map_text, tasks, movers, seed, policy));
    return TMAPF_OK;
  });
}

tmapf_status tmapf_bench(const char* config_json, char** csv_text,
                         char** summary_json) {
  if (!config_json || !csv_text || !summary_json) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    const json cfg_doc = json::parse(config_json);
    tmapf::BenchConfig cfg;
    cfg.map_text = cfg_doc.at("map").get<std::string>();
    for (const auto& s : cfg_doc.at("scenarios"))
      cfg.scenarios.emplace_back(s.at("name").get<std::string>(),
                                 s.at("text").get<std::string>());
    for (const auto& a : cfg_doc.at("algos")) {
      auto algo = tmapf::algo_from_string(a.get<std::string>());
      if (!algo)
        throw tmapf::ConfigError("unknown algorithm '" +
                                 a.get<std::string>() + "'");
      cfg.algos.push_back(*algo);
    }
    const std::string cost_s = cfg_doc.value("cost", "cost1");
    auto cost = tmapf::cost_from_string(cost_s);
    if (!cost) throw tmapf::ConfigError("unknown cost function '" + cost_s + "'");
    cfg.cost = *cost;
    cfg.timeout_secs = cfg_doc.value("timeout_secs", 300.0);
    cfg.seed = cfg_doc.value("seed", (uint64_t)0);
    cfg.validate = cfg_doc.value("validate", false);
    cfg.jobs = cfg_doc.value("jobs", 1);
    auto report = tmapf::run_bench(cfg);
    *csv_text = dup_string(report.csv);
    *summary_json = dup_string(report.summary_json);
    return TMAPF_OK;
  });
}

tmapf_status tmapf_baseline(const tmapf_problem* p, long long* cost,
                            int* finite) {
  if (!p || !cost || !finite) {
    g_last_error = "null argument";
    return TMAPF_ERR_INVALID_ARG;
  }
  return wrap([&] {
    auto [c, f] = tmapf::baseline_cost(p->prob);
    *cost = c;
    *finite = f ? 1 : 0;
    return TMAPF_OK;
  });
}

}  // extern "C"
