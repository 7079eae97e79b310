#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "helpers.hpp"
#include "tmapf/bench.hpp"

using namespace tmapf;

TEST_CASE("baseline_cost") {
  SUBCASE("single agent open row: its distance") {
    auto [c, finite] = baseline_cost(testutil::toy("toy2"));
    CHECK(finite);
    CHECK(c == 2);
  }
  SUBCASE("TOY-1: the wall makes the baseline infinite") {
    auto [c, finite] = baseline_cost(testutil::toy("toy1"));
    (void)c;
    CHECK_FALSE(finite);
  }
  SUBCASE("warehouse scenario: sum of per-agent distances") {
    const auto map = generate_warehouse(WarehouseProfile::small(), 0);
    const auto scen =
        generate_scenario(map, 4, 20, 7, MoverStartPolicy::under_shelf);
    Problem p = load_problem(map, scen);
    auto [c, finite] = baseline_cost(p);
    REQUIRE(finite);
    Problem frozen = p.to_static();
    long long expect = 0;
    for (const auto& a : p.task_agents)
      expect += bfs_distance(frozen.graph, a.start, a.goal, false);
    CHECK(c == expect);
  }
}

namespace {

BenchConfig tiny_batch() {
  BenchConfig cfg;
  cfg.map_text = testutil::map_text(7, 4,
                                    ".......\n"
                                    ".@@M@@.\n"
                                    ".......\n"
                                    ".......\n");
  for (uint64_t seed : {1, 2, 3}) {
    auto scen = generate_scenario(cfg.map_text, 2, 1, seed,
                                  MoverStartPolicy::under_shelf);
    cfg.scenarios.emplace_back("scen" + std::to_string(seed), scen);
  }
  cfg.algos = {Algo::cbs, Algo::tfcbs, Algo::tfpbs};
  cfg.cost = CostFn::cost1;
  cfg.timeout_secs = 30;
  cfg.validate = true;
  return cfg;
}

}  // namespace

TEST_CASE("run_bench: records, aggregates, determinism") {
  auto cfg = tiny_batch();
  auto report = run_bench(cfg);
  CHECK(report.records.size() == 9);  // 3 scenarios x 3 algorithms
  CHECK(report.validation_failures == 0);
  CHECK_FALSE(report.all_timed_out);

  // per-record sanity: static algorithms report soc
  for (const auto& r : report.records) {
    if (r.algo == Algo::cbs) CHECK(r.cost_fn == CostFn::soc);
    if (r.algo == Algo::tfcbs) CHECK(r.cost_fn == CostFn::cost1);
  }

  // reports regenerate purely from records
  CHECK(records_to_csv(report.records) == report.csv);
  CHECK(summarize(report.records, cfg.algos) == report.summary_json);

  // byte-identical on a rerun
  auto again = run_bench(cfg);
  CHECK(again.csv == report.csv);
  CHECK(again.summary_json == report.summary_json);

  // parallel workers must not change the report bytes
  auto par = cfg;
  par.jobs = 4;
  auto rpar = run_bench(par);
  CHECK(rpar.csv == report.csv);
  CHECK(rpar.summary_json == report.summary_json);

  // csv header shape
  CHECK(report.csv.rfind("scenario,algorithm,cost_function,outcome,cost,"
                         "baseline,suboptimality,hl_expansions,ll_expansions,"
                         "seed\n",
                         0) == 0);
}

TEST_CASE("run_bench: never-worse and the suboptimality sandwich hold") {
  auto cfg = tiny_batch();
  auto report = run_bench(cfg);
  // index records: scenario -> algo -> cost
  std::map<std::string, std::map<Algo, long long>> costs;
  for (const auto& r : report.records)
    if (r.outcome == Outcome::solved) costs[r.scenario][r.algo] = r.cost;
  for (auto& [scen, by_algo] : costs) {
    if (by_algo.count(Algo::cbs) && by_algo.count(Algo::tfcbs))
      CHECK(by_algo[Algo::tfcbs] <= by_algo[Algo::cbs]);
    if (by_algo.count(Algo::tfcbs) && by_algo.count(Algo::tfpbs))
      CHECK(by_algo[Algo::tfpbs] >= by_algo[Algo::tfcbs]);
  }
}

TEST_CASE("run_bench: config errors") {
  BenchConfig cfg;
  cfg.map_text = testutil::map_text(3, 1, "...\n");
  cfg.scenarios.emplace_back("s", "version 1\nseed 0\nT 0 0 2 0\n");
  CHECK_THROWS_AS((void)run_bench(cfg), ConfigError);  // no algorithms
}
