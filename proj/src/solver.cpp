#include "tmapf/solver.hpp"

#include <algorithm>

namespace tmapf {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::solved: return "solved";
    case Outcome::infeasible: return "infeasible";
    case Outcome::no_solution: return "no-solution";
    case Outcome::timeout: return "timeout";
    case Outcome::cap_exceeded: return "cap-exceeded";
  }
  return "?";
}

const char* to_string(Algo a) {
  switch (a) {
    case Algo::cbs: return "cbs";
    case Algo::pbs: return "pbs";
    case Algo::tfcbs: return "tfcbs";
    case Algo::tfpbs: return "tfpbs";
  }
  return "?";
}

const char* to_string(CostFn f) {
  switch (f) {
    case CostFn::soc: return "soc";
    case CostFn::cost1: return "cost1";
    case CostFn::cost2: return "cost2";
  }
  return "?";
}

std::optional<Algo> algo_from_string(const std::string& s) {
  if (s == "cbs") return Algo::cbs;
  if (s == "pbs") return Algo::pbs;
  if (s == "tfcbs") return Algo::tfcbs;
  if (s == "tfpbs") return Algo::tfpbs;
  return std::nullopt;
}

std::optional<CostFn> cost_from_string(const std::string& s) {
  if (s == "soc") return CostFn::soc;
  if (s == "cost1") return CostFn::cost1;
  if (s == "cost2") return CostFn::cost2;
  return std::nullopt;
}

std::vector<int> assign_movers(const Problem& p) {
  const int nm = p.num_movers();
  std::vector<int> assignment(nm, -1);
  std::vector<char> claimed(p.num_movables(), 0);
  DistanceMaps maps;
  maps.graph = &p.graph;
  for (int j = 0; j < nm; ++j) {
    const auto& dist = maps.to(p.mover_starts[(size_t)j], true);
    int best = -1, best_d = kInfTime + 1;
    for (int k = 0; k < p.num_movables(); ++k) {
      if (claimed[(size_t)k]) continue;
      const int d = dist[(size_t)p.movable_starts[(size_t)k]];
      if (d < best_d) {  // ties keep the lower obstacle index
        best_d = d;
        best = k;
      }
    }
    assignment[(size_t)j] = best;
    claimed[(size_t)best] = 1;
  }
  return assignment;
}

Solution assemble_solution(const Problem& p,
                           const std::vector<EntityPath>& paths) {
  const int nt = p.num_tasks();
  int k = 0;
  for (const auto& path : paths) k = std::max(k, path.end());
  Solution sol;
  sol.states.resize((size_t)k + 1);
  for (int t = 0; t <= k; ++t) {
    State& s = sol.states[(size_t)t];
    s.time = t;
    for (int i = 0; i < nt; ++i) s.tasks.push_back(paths[(size_t)i].at(t));
    for (int j = 0; j < p.num_movers(); ++j) {
      const auto& mp = paths[(size_t)(nt + j)];
      s.movers.push_back(mp.at(t));
    }
    s.obstacles.resize((size_t)p.num_movables());
    for (int j = 0; j < p.num_movers(); ++j) {
      const int k2 = (*p.assignment)[(size_t)j];
      s.obstacles[(size_t)k2] = obstacle_at(p, paths[(size_t)(nt + j)], j, t);
    }
  }
  return sol;
}

SolveResult solve(const Problem& p, Algo algo, const SolveConfig& cfg) {
  switch (algo) {
    case Algo::cbs: return cbs_solve(p, cfg);
    case Algo::pbs: return pbs_solve(p, cfg);
    case Algo::tfcbs: return tfcbs_solve(p, cfg);
    case Algo::tfpbs: return tfpbs_solve(p, cfg);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace tmapf
