#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tmapf/model.hpp"

namespace tmapf {

// Space-time constraint on a single entity's agent footprint. A positive
// constraint is a landmark the entity must occupy; it implicitly forbids the
// locus for every other entity (both agent and carried-obstacle footprints).
struct Constraint {
  bool positive = false;
  int entity = -1;  // entity id: task index, or num_tasks + mover index
  bool is_edge = false;
  int u = -1;  // edge source (is_edge only)
  int v = -1;  // vertex, or edge target
  int t = 0;
};

// A movable obstacle's start vertex is off limits to task agents and to
// carrying movers at every timestep strictly before release_time.
struct TimedConstraint {
  int vertex = -1;
  int release_time = 0;
};

struct EntityRef {
  bool is_mover = false;
  int index = 0;  // task index or mover index
};

// Per-entity lookup structure. Task agents query with carrying=true (they
// collide with obstacles at all times); movers flip the flag at pickup.
struct ConstraintTable {
  int horizon = 0;
  int home = -1;  // the mover's obstacle start vertex, -1 for task agents
  bool infeasible = false;
  std::string infeasible_reason;

  std::unordered_set<uint64_t> block_agent_v;  // (t,v): blocked in all phases
  std::unordered_set<uint64_t> block_carry_v;  // (t,v): blocked while carrying
  std::unordered_set<uint64_t> block_agent_e;  // (t,u,v)
  std::unordered_set<uint64_t> block_carry_e;
  std::unordered_set<int> approach_forbidden;  // own obstacle barred from home
  std::map<int, int> landmarks;                // t -> vertex
  std::unordered_map<int, int> timed_release;  // vertex -> release timestep
  std::unordered_map<int, int> parked_always;  // vertex -> blocked from t on
  std::unordered_map<int, int> parked_carry;
  std::unordered_map<int, int> max_block_at;  // vertex -> latest blocking t
  int max_landmark_t = -1;
  // latest timestep any entry distinguishes; beyond it the table is
  // time-invariant and searches may collapse the time dimension
  int max_time = 0;

  static uint64_t vkey(int t, int v) {
    return ((uint64_t)t << 32) | (uint32_t)v;
  }
  static uint64_t ekey(int t, int u, int v) {
    return ((uint64_t)t << 44) | ((uint64_t)(uint32_t)u << 22) | (uint32_t)v;
  }

  void add_vertex_block(int t, int v, bool carry_only);
  void add_edge_block(int t, int u, int v, bool carry_only);
  void add_landmark(int t, int v);
  void add_parked(int v, int from, bool carry_only);

  bool vertex_ok(int v, int t, bool carrying) const;
  bool edge_ok(int u, int v, int t, bool carrying) const;
  // earliest timestep from which the entity could sit at v forever;
  // kInfTime when settlement there is impossible
  int settle_earliest(int v) const;
};

// Builds the table for one entity from a CT node's constraint set plus the
// node's timed constraints. Marks the table infeasible on contradictory
// positives.
ConstraintTable build_table(const Problem& p,
                            const std::vector<Constraint>& constraints,
                            const std::vector<TimedConstraint>& timed,
                            EntityRef who, int horizon);

int entity_id(const Problem& p, EntityRef who);

}  // namespace tmapf
