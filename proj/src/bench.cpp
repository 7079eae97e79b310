#include "tmapf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tmapf/oracle.hpp"

namespace tmapf {

using json = nlohmann::json;

std::pair<long long, bool> baseline_cost(const Problem& p) {
  Problem frozen = p.to_static();
  long long total = 0;
  DistanceMaps maps;
  maps.graph = &frozen.graph;
  for (const auto& a : p.task_agents) {
    const int d = maps.to(a.goal, false)[(size_t)a.start];
    if (d >= kInfTime) return {-1, false};
    total += d;
  }
  return {total, true};
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

RunRecord run_cell(const BenchConfig& cfg, const Problem& base,
                   const std::string& scen_name, Algo algo) {
  RunRecord rec;
  rec.scenario = scen_name;
  rec.algo = algo;
  rec.cost_fn = algo == Algo::cbs || algo == Algo::pbs ? CostFn::soc : cfg.cost;
  rec.seed = cfg.seed;

  const bool is_static = algo == Algo::cbs || algo == Algo::pbs;
  Problem prob = is_static ? base.to_static() : base;

  auto [bl, finite] = baseline_cost(base);
  rec.baseline = finite ? bl : -1;

  SolveConfig scfg;
  scfg.cost = cfg.cost;
  scfg.timeout_secs = cfg.timeout_secs;
  scfg.seed = cfg.seed;
  SolveResult r = solve(prob, algo, scfg);
  rec.outcome = r.outcome;
  rec.hl_expansions = r.stats.hl_expansions;
  rec.ll_expansions = r.stats.ll_expansions;
  rec.wall_ms = r.stats.wall_ms;
  if (r.outcome == Outcome::solved) {
    rec.cost = r.cost;
    if (finite && bl > 0) rec.subopt = (double)r.cost / (double)bl;
    if (cfg.validate) {
      auto cert = certify(prob, *r.solution,
                          prob.is_mapf() ? Mode::mapf : Mode::tmapf);
      rec.validated_ok = cert.ok;
    }
  }
  return rec;
}

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << "scenario,algorithm,cost_function,outcome,cost,baseline,"
        "suboptimality,hl_expansions,ll_expansions,seed\n";
  for (const auto& r : records) {
    os << r.scenario << ',' << to_string(r.algo) << ','
       << to_string(r.cost_fn) << ',' << to_string(r.outcome) << ',';
    if (r.outcome == Outcome::solved) os << r.cost;
    os << ',';
    if (r.baseline >= 0)
      os << r.baseline;
    else
      os << "inf";
    os << ',';
    if (r.subopt >= 0) os << fmt_double(r.subopt);
    os << ',' << r.hl_expansions << ',' << r.ll_expansions << ',' << r.seed
       << '\n';
  }
  return os.str();
}

std::string summarize(const std::vector<RunRecord>& records,
                      const std::vector<Algo>& algos) {
  // cells solved by every compared algorithm, to keep the means comparable
  std::map<std::string, int> solved_count;
  for (const auto& r : records)
    if (r.outcome == Outcome::solved) ++solved_count[r.scenario];
  std::set<std::string> common;
  for (const auto& [scen, n] : solved_count)
    if (n == (int)algos.size()) common.insert(scen);

  json doc;
  doc["common_solved_cells"] = (long long)common.size();
  bool all_timed_out = !records.empty();
  int validation_failures = 0;
  for (const auto& r : records) {
    if (r.outcome != Outcome::timeout) all_timed_out = false;
    if (!r.validated_ok) ++validation_failures;
  }
  doc["all_timed_out"] = all_timed_out;
  doc["validation_failures"] = validation_failures;
  json per_algo;
  for (Algo a : algos) {
    long long cells = 0, solved = 0, timeout = 0, infeasible = 0, nosol = 0;
    double hl_sum = 0;
    std::vector<double> subopts;
    std::vector<long long> common_costs;
    for (const auto& r : records) {
      if (r.algo != a) continue;
      ++cells;
      switch (r.outcome) {
        case Outcome::solved: ++solved; break;
        case Outcome::timeout: ++timeout; break;
        case Outcome::infeasible: ++infeasible; break;
        case Outcome::no_solution: ++nosol; break;
        default: break;
      }
      if (r.outcome == Outcome::solved) {
        hl_sum += (double)r.hl_expansions;
        if (common.count(r.scenario)) {
          common_costs.push_back(r.cost);
          if (r.subopt >= 0) subopts.push_back(r.subopt);
        }
      }
    }
    json ja;
    ja["cells"] = cells;
    ja["solved"] = solved;
    ja["timeout"] = timeout;
    ja["infeasible"] = infeasible;
    ja["no_solution"] = nosol;
    ja["success_rate"] = cells > 0 ? (double)solved / (double)cells : 0.0;
    ja["mean_hl_expansions_solved"] =
        solved > 0 ? hl_sum / (double)solved : 0.0;
    if (!subopts.empty()) {
      std::sort(subopts.begin(), subopts.end());
      double mean = 0;
      for (double s : subopts) mean += s;
      ja["mean_subopt_common"] = mean / (double)subopts.size();
      ja["median_subopt_common"] = subopts[subopts.size() / 2];
    }
    if (!common_costs.empty()) {
      double mean = 0;
      for (long long c : common_costs) mean += (double)c;
      ja["mean_cost_common"] = mean / (double)common_costs.size();
    }
    per_algo[to_string(a)] = std::move(ja);
  }
  doc["per_algo"] = std::move(per_algo);
  return doc.dump(2) + "\n";
}

BenchReport run_bench(const BenchConfig& cfg) {
  if (cfg.algos.empty()) throw ConfigError("no algorithms selected");
  const ParsedMap map = parse_map(cfg.map_text);

  struct Cell {
    std::string scen_name;
    Problem problem;
    Algo algo;
  };
  std::vector<Cell> cells;
  for (const auto& [name, text] : cfg.scenarios) {
    Problem prob = build_problem(map, parse_scenario(text));
    for (Algo a : cfg.algos) cells.push_back({name, prob, a});
  }

  BenchReport report;
  report.records.resize(cells.size());
  const int jobs = std::max(1, cfg.jobs);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      report.records[i] =
          run_cell(cfg, cells[i].problem, cells[i].scen_name, cells[i].algo);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  report.all_timed_out = !report.records.empty();
  for (const auto& r : report.records) {
    if (r.outcome != Outcome::timeout) report.all_timed_out = false;
    if (!r.validated_ok) ++report.validation_failures;
  }
  report.csv = records_to_csv(report.records);
  report.summary_json = summarize(report.records, cfg.algos);
  return report;
}

}  // namespace tmapf
