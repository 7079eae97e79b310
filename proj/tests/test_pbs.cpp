#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "tmapf/oracle.hpp"
#include "tmapf/pbs.hpp"

using namespace tmapf;

TEST_CASE("topological_order") {
  SUBCASE("mentioned entities sort, the rest keep index order") {
    // {a3 < a1, a1 < a2} over four entities
    auto order = topological_order({{2, 0}, {0, 1}}, 4);
    CHECK(order == std::vector<int>{2, 0, 1, 3});
  }
  SUBCASE("empty set keeps the original order") {
    CHECK(topological_order({}, 3) == std::vector<int>{0, 1, 2});
  }
  SUBCASE("cycles raise") {
    CHECK_THROWS_AS((void)topological_order({{0, 1}, {1, 0}}, 2), CycleError);
  }
}

TEST_CASE("pbs: single agent solves in one PT node") {
  Problem p = testutil::toy("toy2");
  SolveConfig cfg;
  auto r = pbs_solve(p, cfg);
  REQUIRE(r.outcome == Outcome::solved);
  CHECK(r.cost == 2);
  CHECK(r.stats.hl_expansions == 1);
}

TEST_CASE("pbs: corridor crossing is valid and no cheaper than cbs") {
  Problem p = load_problem(testutil::map_text(5, 3, ".....\n.....\n.....\n"),
                           "version 1\nseed 0\nT 0 1 4 1\nT 4 1 0 1\n");
  SolveConfig cfg;
  auto r = pbs_solve(p, cfg);
  REQUIRE(r.outcome == Outcome::solved);
  CHECK(certify(p, *r.solution, Mode::mapf).ok);
  auto c = cbs_solve(p, cfg);
  REQUIRE(c.outcome == Outcome::solved);
  CHECK(r.cost >= c.cost);
}

TEST_CASE("pbs: every total order starves an agent while cbs solves") {
  // single-file corridor with one pocket only reachable from the middle;
  // whoever is prioritized sweeps the row and traps the other
  Problem p = load_problem(testutil::map_text(5, 2, ".....\n@@.@@\n"),
                           "version 1\nseed 0\nT 0 0 4 0\nT 4 0 0 0\n");
  SolveConfig cfg;
  auto r = pbs_solve(p, cfg);
  CHECK(r.outcome == Outcome::no_solution);
  auto c = cbs_solve(p, cfg);
  CHECK(c.outcome == Outcome::solved);
}

TEST_CASE("tfpbs: TOY-1 solves at or above the tfcbs optimum") {
  Problem p = testutil::toy("toy1");
  SolveConfig cfg;
  cfg.cost = CostFn::cost1;
  auto r = tfpbs_solve(p, cfg);
  REQUIRE(r.outcome == Outcome::solved);
  REQUIRE(certify(p, *r.solution, Mode::tmapf).ok);
  CHECK(cost1(p, *r.solution) == r.cost);
  CHECK(r.cost >= 8);  // frozen tfcbs/oracle optimum
}

TEST_CASE("tfpbs: idle movers match pbs on the task agents alone") {
  Problem p = load_problem(
      testutil::map_text(5, 3, "....M\n.....\n.....\n"),
      "version 1\nseed 0\nT 0 0 0 2\nT 0 1 3 1\nM 4 0 4 0\n");
  SolveConfig cfg;
  cfg.cost = CostFn::cost1;
  auto tf = tfpbs_solve(p, cfg);
  REQUIRE(tf.outcome == Outcome::solved);
  auto st = pbs_solve(p.to_static(), cfg);
  REQUIRE(st.outcome == Outcome::solved);
  CHECK(tf.cost == st.cost);
}

TEST_CASE("tfpbs: solutions never beat tfcbs on random instances") {
  SplitMix64 rng(41);
  int both = 0;
  for (int it = 0; it < 30; ++it) {
    Problem p = testutil::random_tmapf(rng);
    SolveConfig cfg;
    cfg.cost = CostFn::cost1;
    cfg.timeout_secs = 20;
    auto opt = tfcbs_solve(p, cfg);
    auto heur = tfpbs_solve(p, cfg);
    if (heur.outcome == Outcome::solved) {
      REQUIRE(certify(p, *heur.solution, Mode::tmapf).ok);
      if (opt.outcome == Outcome::solved) {
        CHECK(heur.cost >= opt.cost);
        ++both;
      }
    }
  }
  CHECK(both > 5);
}

TEST_CASE("pbs determinism: identical runs, identical traversal") {
  SplitMix64 rng(43);
  for (int it = 0; it < 10; ++it) {
    Problem p = testutil::random_mapf(rng);
    SolveConfig cfg;
    auto a = pbs_solve(p, cfg);
    auto b = pbs_solve(p, cfg);
    CHECK(a.outcome == b.outcome);
    CHECK(a.cost == b.cost);
    CHECK(a.stats.hl_expansions == b.stats.hl_expansions);
    CHECK(a.stats.ll_expansions == b.stats.ll_expansions);
    if (a.solution && b.solution) {
      REQUIRE(a.solution->length() == b.solution->length());
      for (int t = 0; t < a.solution->length(); ++t)
        CHECK(a.solution->states[(size_t)t].tasks ==
              b.solution->states[(size_t)t].tasks);
    }
  }
}

TEST_CASE("direct priorities use the shortcut transitive ordering wastes") {
  // A mover parked on the only mid-row gap. Task 0 is nearly indifferent to
  // the shortcut (cheap detour around the left passage) while task 1 saves a
  // lot through it. With task0-before-task1 already ordered, pricing task 0
  // out of the gap puts the mover above it; the transitive closure then
  // drags task 1 around the long way (the opposite order would close a
  // priority cycle), whereas direct prioritization lets task 1 negotiate
  // with the mover on its own and ride through the cleared gap.
  Problem p = load_problem(
      testutil::map_text(11, 4,
                         "...........\n"
                         "...........\n"
                         ".@@@@M@@@@.\n"
                         "...........\n"),
      "version 1\nseed 0\n"
      "T 5 1 1 3\n"
      "T 5 0 6 3\n"
      "M 5 2 5 2\n");
  SolveConfig direct;
  direct.cost = CostFn::cost1;
  direct.initial_priorities = {{0, 1}};  // task 0 before task 1
  auto rd = tfpbs_solve(p, direct);
  SolveConfig trans = direct;
  trans.transitive = true;
  auto rt = tfpbs_solve(p, trans);
  REQUIRE(rd.outcome == Outcome::solved);
  REQUIRE(rt.outcome == Outcome::solved);
  REQUIRE(certify(p, *rd.solution, Mode::tmapf).ok);
  REQUIRE(certify(p, *rt.solution, Mode::tmapf).ok);
  CHECK(rd.cost < rt.cost);
}
