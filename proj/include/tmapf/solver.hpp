#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmapf/conflicts.hpp"
#include "tmapf/lowlevel.hpp"

namespace tmapf {

enum class Algo { cbs, pbs, tfcbs, tfpbs };

enum class Outcome { solved, infeasible, no_solution, timeout, cap_exceeded };

const char* to_string(Outcome o);
const char* to_string(Algo a);
const char* to_string(CostFn f);
std::optional<Algo> algo_from_string(const std::string& s);
std::optional<CostFn> cost_from_string(const std::string& s);

struct SolveConfig {
  CostFn cost = CostFn::cost1;
  double timeout_secs = 300.0;
  uint64_t seed = 0;  // recorded in outputs; solvers are deterministic
  int horizon = 0;    // 0: derive from the instance
  // tfpbs study hook: replace direct prioritization with the classic
  // transitive ordering (pbs always orders transitively)
  bool transitive = false;
  // test hooks: pre-seeded CT constraints / PT priority pairs
  std::vector<Constraint> initial_constraints;
  std::vector<std::pair<int, int>> initial_priorities;
};

struct SolveStats {
  long long hl_expansions = 0;
  long long ll_expansions = 0;
  double wall_ms = 0;
};

struct SolveResult {
  Outcome outcome = Outcome::infeasible;
  std::optional<Solution> solution;
  long long cost = -1;
  SolveStats stats;
};

// greedy nearest-obstacle assignment over distances that ignore obstacles
std::vector<int> assign_movers(const Problem& p);

SolveResult cbs_solve(const Problem& p, const SolveConfig& cfg);
SolveResult tfcbs_solve(const Problem& p, const SolveConfig& cfg);
SolveResult pbs_solve(const Problem& p, const SolveConfig& cfg);
SolveResult tfpbs_solve(const Problem& p, const SolveConfig& cfg);

SolveResult solve(const Problem& p, Algo algo, const SolveConfig& cfg);

// joint states from per-entity paths, padded to the longest settlement
Solution assemble_solution(const Problem& p,
                           const std::vector<EntityPath>& paths);

}  // namespace tmapf
