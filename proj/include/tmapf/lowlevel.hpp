#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "tmapf/table.hpp"

namespace tmapf {

enum class CostFn { soc, cost1, cost2 };

using Clock = std::chrono::steady_clock;

struct Deadline {
  bool enabled = false;
  Clock::time_point at{};
  bool expired() const { return enabled && Clock::now() >= at; }
  static Deadline after_seconds(double secs);
};

// BFS distance maps, keyed by goal vertex. The "ground" flavor walks only
// passable cells; "air" ignores passability (movers travel under obstacles).
struct DistanceMaps {
  const Graph* graph = nullptr;
  std::map<int, std::vector<int>> ground, air;
  const std::vector<int>& to(int goal, bool through_obstacles);
};

int bfs_distance(const Graph& g, int from, int to, bool through_obstacles);

// max finite BFS eccentricity, ignoring passability
int graph_diameter(const Graph& g);

int default_horizon(const Problem& p);

struct SearchLimits {
  int horizon = 0;
  const Deadline* deadline = nullptr;
  long long* expansions = nullptr;  // accumulated across calls
};

enum class LowLevelStatus { found, infeasible, timeout };

struct TimedPath {
  LowLevelStatus status = LowLevelStatus::infeasible;
  std::vector<int> verts;  // vertex per timestep, t = 0..arrival
  int arrival() const { return (int)verts.size() - 1; }
};

// Minimal-settlement-time path from start to goal. hard_blocked marks cells
// the entity may never occupy (static obstacles for task agents). The path
// visits every positive landmark at its timestep and ends at a timestep from
// which the goal stays free of the entity's constraints.
TimedPath spacetime_astar(const Graph& g, int start, int goal,
                          const ConstraintTable& table,
                          const std::vector<uint8_t>& hard_blocked,
                          DistanceMaps& dist, const SearchLimits& lim);

struct MoverPlan {
  LowLevelStatus status = LowLevelStatus::infeasible;
  std::vector<int> verts;
  int arrival() const { return (int)verts.size() - 1; }
  int pickup = -1;          // first timestep at the obstacle's start vertex
  int approach_moves = 0;   // non-wait moves departing before pickup
  int carried_moves = 0;    // non-wait moves after pickup
  long long weighted_cost = 0;
  long long marginal(CostFn f) const {
    return f == CostFn::cost2 ? approach_moves + carried_moves : carried_moves;
  }
};

// Two-part mover search: walk to the assigned obstacle (free to pass under
// obstacles), then a closed carrying tour that ends parked at the obstacle's
// start vertex. Minimizes the marginal contribution under cost_fn (carried
// moves, plus approach moves under cost2; waits are free), tie-broken by
// earlier pickup.
MoverPlan mover_lowlevel(const Problem& p, int mover,
                         const ConstraintTable& table, CostFn cost_fn,
                         DistanceMaps& dist, const SearchLimits& lim);

// Minimal pickup timestep over constraint-respecting approach paths;
// kInfTime when the obstacle is unreachable within the horizon.
int eta_lower_bound(const Problem& p, int mover, const ConstraintTable& table,
                    DistanceMaps& dist, const SearchLimits& lim);

}  // namespace tmapf
