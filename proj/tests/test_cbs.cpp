#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "tmapf/oracle.hpp"
#include "tmapf/solver.hpp"

using namespace tmapf;

TEST_CASE("cbs: single agent expands one CT node") {
  Problem p = testutil::toy("toy2");
  SolveConfig cfg;
  auto r = cbs_solve(p, cfg);
  REQUIRE(r.outcome == Outcome::solved);
  CHECK(r.cost == 2);
  CHECK(r.stats.hl_expansions == 1);
  CHECK(certify(p, *r.solution, Mode::mapf).ok);
}

TEST_CASE("cbs: opposing agents through a corridor with a pocket") {
  Problem p = load_problem(testutil::map_text(5, 2, ".....\n@@.@@\n"),
                           "version 1\nseed 0\nT 0 0 4 0\nT 4 0 0 0\n");
  SolveConfig cfg;
  auto r = cbs_solve(p, cfg);
  REQUIRE(r.outcome == Outcome::solved);
  auto oracle = brute_force_optimal(p, Mode::mapf, CostFn::soc);
  REQUIRE(oracle.status == OracleResult::Status::optimal);
  CHECK(r.cost == oracle.cost);
  CHECK(certify(p, *r.solution, Mode::mapf).ok);
}

TEST_CASE("cbs: TOY-1 with the movable frozen is infeasible") {
  Problem p = testutil::toy("toy1").to_static();
  SolveConfig cfg;
  auto r = cbs_solve(p, cfg);
  CHECK(r.outcome == Outcome::infeasible);
}

TEST_CASE("cbs rejects terraforming instances") {
  Problem p = testutil::toy("toy1");
  SolveConfig cfg;
  CHECK_THROWS_AS((void)cbs_solve(p, cfg), ConfigError);
}

TEST_CASE("assign_movers greedy nearest with tie rules") {
  SUBCASE("one mover one obstacle") {
    Problem p = testutil::toy("toy1");
    CHECK(assign_movers(p) == std::vector<int>{0});
  }
  SUBCASE("equidistant movers: lower mover index claims first") {
    Problem p = load_problem(
        testutil::map_text(5, 3, "..M..\n.....\n..M..\n"),
        "version 1\nseed 0\nT 0 1 4 1\nM 0 0 2 0\nM 4 0 2 2\n");
    // drop the explicit assignment and recompute
    p.assignment.reset();
    auto a = assign_movers(p);
    // mover 0 at (0,0): distance 2 to movable (2,0), 4 to (2,2)
    CHECK(a == std::vector<int>{0, 1});
  }
  SUBCASE("mover on a movable claims it at distance zero") {
    Problem p = load_problem(testutil::map_text(4, 1, "M..M\n"),
                             "version 1\nseed 0\nM 3 0\nM 1 0\n");
    p.assignment.reset();
    auto a = assign_movers(p);
    CHECK(a == std::vector<int>{1, 0});
  }
}

TEST_CASE("tfcbs: TOY-1 matches the frozen oracle goldens") {
  Problem p = testutil::toy("toy1");
  SolveConfig cfg;
  cfg.cost = CostFn::cost1;
  auto r = tfcbs_solve(p, cfg);
  REQUIRE(r.outcome == Outcome::solved);
  CHECK(r.cost == 8);  // frozen: brute-force joint-state optimum
  REQUIRE(certify(p, *r.solution, Mode::tmapf).ok);
  CHECK(cost1(p, *r.solution) == r.cost);

  cfg.cost = CostFn::cost2;
  auto r2 = tfcbs_solve(p, cfg);
  REQUIRE(r2.outcome == Outcome::solved);
  CHECK(r2.cost == 9);  // frozen
  CHECK(cost2(p, *r2.solution) == r2.cost);
}

TEST_CASE("tfcbs: idle movers reproduce the plain CBS optimum") {
  // movables tucked in a corner no task agent needs
  Problem p = load_problem(
      testutil::map_text(5, 3, "....M\n.....\n.....\n"),
      "version 1\nseed 0\nT 0 0 0 2\nT 0 1 3 1\nM 4 0 4 0\n");
  SolveConfig cfg;
  cfg.cost = CostFn::cost1;
  auto tf = tfcbs_solve(p, cfg);
  REQUIRE(tf.outcome == Outcome::solved);
  auto st = cbs_solve(p.to_static(), cfg);
  REQUIRE(st.outcome == Outcome::solved);
  CHECK(tf.cost == st.cost);
}

TEST_CASE("tfcbs: TOY-4 beats the static optimum (frozen goldens)") {
  Problem p = testutil::toy("toy4");
  SolveConfig cfg;
  cfg.cost = CostFn::cost1;
  auto tf = tfcbs_solve(p, cfg);
  REQUIRE(tf.outcome == Outcome::solved);
  CHECK(tf.cost == 7);  // frozen from the oracle
  auto st = cbs_solve(p.to_static(), cfg);
  REQUIRE(st.outcome == Outcome::solved);
  CHECK(st.cost == 9);  // frozen
  CHECK(tf.cost < st.cost);
}

TEST_CASE("cbs equals the oracle on random small instances") {
  SplitMix64 rng(23);
  int solved = 0;
  for (int it = 0; it < 40; ++it) {
    Problem p = testutil::random_mapf(rng);
    auto oracle = brute_force_optimal(p, Mode::mapf, CostFn::soc, 2000000);
    if (oracle.status == OracleResult::Status::cap_exceeded) continue;
    SolveConfig cfg;
    cfg.timeout_secs = 30;
    auto r = cbs_solve(p, cfg);
    if (oracle.status == OracleResult::Status::infeasible) {
      CHECK(r.outcome == Outcome::infeasible);
    } else {
      REQUIRE(r.outcome == Outcome::solved);
      CHECK(r.cost == oracle.cost);
      CHECK(certify(p, *r.solution, Mode::mapf).ok);
      ++solved;
    }
  }
  CHECK(solved > 10);
}

TEST_CASE("tfcbs equals the oracle on random terraforming instances") {
  SplitMix64 rng(29);
  int solved = 0;
  for (int it = 0; it < 25; ++it) {
    Problem p = testutil::random_tmapf(rng);
    for (CostFn f : {CostFn::cost1, CostFn::cost2}) {
      auto oracle = brute_force_optimal(p, Mode::tmapf, f, 2000000);
      if (oracle.status == OracleResult::Status::cap_exceeded) continue;
      SolveConfig cfg;
      cfg.cost = f;
      cfg.timeout_secs = 60;
      auto r = tfcbs_solve(p, cfg);
      if (oracle.status == OracleResult::Status::infeasible) {
        CHECK(r.outcome == Outcome::infeasible);
      } else {
        REQUIRE(r.outcome == Outcome::solved);
        CHECK(r.cost == oracle.cost);
        REQUIRE(certify(p, *r.solution, Mode::tmapf).ok);
        const long long recomputed =
            f == CostFn::cost1 ? cost1(p, *r.solution) : cost2(p, *r.solution);
        CHECK(recomputed == r.cost);
        ++solved;
      }
    }
  }
  CHECK(solved > 10);
}

TEST_CASE("disjoint split preserves the optimum in the children") {
  // at the root split, min(child subtree optima) must equal the optimum
  SplitMix64 rng(31);
  int checked = 0;
  for (int it = 0; it < 30 && checked < 8; ++it) {
    Problem p = testutil::random_mapf(rng);
    auto oracle = brute_force_optimal(p, Mode::mapf, CostFn::soc, 2000000);
    if (oracle.status != OracleResult::Status::optimal) continue;
    SolveConfig cfg;
    auto base = cbs_solve(p, cfg);
    REQUIRE(base.outcome == Outcome::solved);
    if (base.stats.hl_expansions < 2) continue;  // no conflict at the root

    // reconstruct the root conflict by replaying the root plans
    // and re-solve under each child constraint
    // (the first conflict of the root node is deterministic)
    // here we simply check both signs of every locus the solver could have
    // split on: run with each initial constraint and compare the best
    // outcome against the oracle
    // -- use the first conflict from independent shortest paths
    // build root paths like the solver does
    // simpler: take the solver's answer as given and assert equality of
    // min over children
    // construct children from the earliest conflict of independent plans
    // via the public pieces
    DistanceMaps dist;
    dist.graph = &p.graph;
    std::vector<uint8_t> statics((size_t)p.graph.size());
    for (int v = 0; v < p.graph.size(); ++v)
      statics[(size_t)v] = p.graph.is_passable(v) ? 0 : 1;
    std::vector<EntityPath> paths((size_t)p.num_tasks());
    Problem q = p;
    q.assignment = std::vector<int>{};
    bool ok = true;
    for (int i = 0; i < p.num_tasks() && ok; ++i) {
      auto tab = build_table(q, {}, {}, {false, i}, 200);
      SearchLimits lim{200, nullptr, nullptr};
      auto path =
          spacetime_astar(p.graph, p.task_agents[(size_t)i].start,
                          p.task_agents[(size_t)i].goal, tab, statics, dist,
                          lim);
      if (path.status != LowLevelStatus::found) ok = false;
      paths[(size_t)i].verts = path.verts;
    }
    if (!ok) continue;
    auto conflicts = detect_conflicts(q, paths);
    if (conflicts.empty()) continue;
    const auto& c = conflicts.front();
    const int entity = c.e1_agent ? c.e1 : c.e2;
    long long best_child = -1;
    for (bool positive : {true, false}) {
      Constraint con;
      con.positive = positive;
      con.entity = entity;
      con.t = c.t;
      if (c.kind == Conflict::Kind::vertex) {
        con.v = c.v;
      } else {
        con.is_edge = true;
        con.u = entity == c.e1 ? c.u : c.v;
        con.v = entity == c.e1 ? c.v : c.u;
      }
      SolveConfig child_cfg;
      child_cfg.initial_constraints = {con};
      auto r = cbs_solve(p, child_cfg);
      if (r.outcome == Outcome::solved)
        best_child = best_child < 0 ? r.cost : std::min(best_child, r.cost);
    }
    CHECK(best_child == oracle.cost);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("tfcbs respects the cooperative timeout") {
  Problem p = testutil::toy("toy1");
  SolveConfig cfg;
  cfg.timeout_secs = 1e-9;
  auto r = tfcbs_solve(p, cfg);
  CHECK(r.outcome == Outcome::timeout);
}
