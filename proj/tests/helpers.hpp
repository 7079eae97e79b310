#pragma once

#include <string>
#include <vector>

#include "tmapf/io.hpp"
#include "tmapf/model.hpp"
#include "tmapf/oracle.hpp"
#include "tmapf/solver.hpp"

namespace testutil {

inline std::string map_text(int width, int height, const std::string& rows) {
  std::string out = "type octile\nheight " + std::to_string(height) +
                    "\nwidth " + std::to_string(width) + "\nmap\n";
  return out + rows;
}

inline tmapf::Problem toy(const std::string& name) {
  for (const auto& inst : tmapf::canonical_instances())
    if (inst.name == name)
      return tmapf::load_problem(inst.map_text, inst.scen_text);
  throw std::runtime_error("unknown canonical instance " + name);
}

// random MAPF instance on a small grid; may be infeasible
inline tmapf::Problem random_mapf(tmapf::SplitMix64& rng, int max_side = 4,
                                  int max_agents = 3) {
  using namespace tmapf;
  for (;;) {
    Problem p;
    p.graph.width = 2 + (int)rng.below((uint64_t)(max_side - 1));
    p.graph.height = 2 + (int)rng.below((uint64_t)(max_side - 1));
    p.graph.passable.assign((size_t)p.graph.size(), 1);
    for (int v = 0; v < p.graph.size(); ++v)
      if (rng.below(5) == 0) p.graph.passable[(size_t)v] = 0;
    std::vector<int> free;
    for (int v = 0; v < p.graph.size(); ++v)
      if (p.graph.is_passable(v)) free.push_back(v);
    const int n = 1 + (int)rng.below((uint64_t)max_agents);
    if ((int)free.size() < n + 1) continue;
    auto starts = free;
    for (int i = 0; i < n; ++i) {
      const size_t j = (size_t)rng.below(starts.size());
      const int s = starts[j];
      starts[j] = starts.back();
      starts.pop_back();
      const int g = free[(size_t)rng.below(free.size())];
      p.task_agents.push_back({s, g});
    }
    bool goals_ok = true;
    for (int i = 0; i < n && goals_ok; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p.task_agents[(size_t)i].goal == p.task_agents[(size_t)j].goal)
          goals_ok = false;
    if (!goals_ok) continue;
    try {
      p.validate();
    } catch (const ConfigError&) {
      continue;
    }
    return p;
  }
}

// random tMAPF instance: <=2 task agents, one mover, one movable
inline tmapf::Problem random_tmapf(tmapf::SplitMix64& rng, int max_side = 4,
                                   int max_tasks = 2) {
  using namespace tmapf;
  for (;;) {
    Problem p;
    p.graph.width = 2 + (int)rng.below((uint64_t)(max_side - 1));
    p.graph.height = 2 + (int)rng.below((uint64_t)(max_side - 1));
    p.graph.passable.assign((size_t)p.graph.size(), 1);
    for (int v = 0; v < p.graph.size(); ++v)
      if (rng.below(6) == 0) p.graph.passable[(size_t)v] = 0;
    std::vector<int> free;
    for (int v = 0; v < p.graph.size(); ++v)
      if (p.graph.is_passable(v)) free.push_back(v);
    const int n = 1 + (int)rng.below((uint64_t)max_tasks);
    if ((int)free.size() < n + 3) continue;

    auto pool = free;
    auto draw = [&]() {
      const size_t j = (size_t)rng.below(pool.size());
      const int v = pool[j];
      pool[j] = pool.back();
      pool.pop_back();
      return v;
    };
    const int movable = draw();
    p.movable_starts.push_back(movable);
    for (int i = 0; i < n; ++i) {
      const int s = draw();
      int g = free[(size_t)rng.below(free.size())];
      if (g == movable) continue;
      p.task_agents.push_back({s, g});
    }
    if ((int)p.task_agents.size() != n) continue;
    bool goals_ok = true;
    for (int i = 0; i < n && goals_ok; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p.task_agents[(size_t)i].goal == p.task_agents[(size_t)j].goal)
          goals_ok = false;
    if (!goals_ok) continue;
    // mover may start anywhere, including under obstacles
    int mv = (int)rng.below((uint64_t)p.graph.size());
    bool clash = false;
    for (const auto& a : p.task_agents)
      if (a.start == mv) clash = true;
    if (clash) continue;
    p.mover_starts.push_back(mv);
    p.assignment = std::vector<int>{0};
    try {
      p.validate();
    } catch (const ConfigError&) {
      continue;
    }
    return p;
  }
}

}  // namespace testutil
