#pragma once

#include <vector>

#include "tmapf/model.hpp"

namespace tmapf {

// One entity's timed trajectory. Task agents use verts only; mover entities
// carry the pickup timestep so the obstacle footprint can be projected
// (at the obstacle's start vertex until pickup, on the agent afterwards).
struct EntityPath {
  std::vector<int> verts;
  int pickup = -1;  // movers only
  int approach_moves = 0;
  int carried_moves = 0;

  int end() const { return (int)verts.size() - 1; }
  int at(int t) const {
    return verts[(size_t)std::min(t, end())];
  }
};

struct Conflict {
  enum class Kind { vertex, edge };
  Kind kind = Kind::vertex;
  int e1 = -1, e2 = -1;  // entity ids, e1 < e2
  int u = -1;            // edge source for e1's traversal (edge kind)
  int v = -1;            // vertex, or e1's edge target
  int t = 0;
  // whether each entity's agent footprint is at the locus (an entity can
  // also collide through its carried/waiting obstacle)
  bool e1_agent = true, e2_agent = true;
};

// obstacle footprint of mover entity j at time t
int obstacle_at(const Problem& p, const EntityPath& path, int mover, int t);

// All vertex and swap conflicts between entity footprints, ordered by time
// then entity ids. Paths shorter than the longest are padded by waiting at
// their last vertex.
std::vector<Conflict> detect_conflicts(const Problem& p,
                                       const std::vector<EntityPath>& paths);

}  // namespace tmapf
