#include "tmapf/table.hpp"

#include <algorithm>

namespace tmapf {

int entity_id(const Problem& p, EntityRef who) {
  return who.is_mover ? p.num_tasks() + who.index : who.index;
}

void ConstraintTable::add_vertex_block(int t, int v, bool carry_only) {
  (carry_only ? block_carry_v : block_agent_v).insert(vkey(t, v));
  max_time = std::max(max_time, t);
  auto it = max_block_at.find(v);
  if (it == max_block_at.end())
    max_block_at[v] = t;
  else
    it->second = std::max(it->second, t);
}

void ConstraintTable::add_edge_block(int t, int u, int v, bool carry_only) {
  (carry_only ? block_carry_e : block_agent_e).insert(ekey(t, u, v));
  max_time = std::max(max_time, t);
  if (u == v) {  // blocking the wait edge also blocks settling there
    auto it = max_block_at.find(v);
    if (it == max_block_at.end())
      max_block_at[v] = t;
    else
      it->second = std::max(it->second, t);
  }
}

void ConstraintTable::add_landmark(int t, int v) {
  auto it = landmarks.find(t);
  if (it != landmarks.end() && it->second != v) {
    infeasible = true;
    infeasible_reason = "contradictory positive constraints at t=" +
                        std::to_string(t);
    return;
  }
  landmarks[t] = v;
  max_landmark_t = std::max(max_landmark_t, t);
  max_time = std::max(max_time, t);
}

void ConstraintTable::add_parked(int v, int from, bool carry_only) {
  auto& m = carry_only ? parked_carry : parked_always;
  auto it = m.find(v);
  if (it == m.end())
    m[v] = from;
  else
    it->second = std::min(it->second, from);
  max_time = std::max(max_time, from);
}

bool ConstraintTable::vertex_ok(int v, int t, bool carrying) const {
  auto lm = landmarks.find(t);
  if (lm != landmarks.end() && lm->second != v) return false;
  if (block_agent_v.count(vkey(t, v))) return false;
  if (!carrying && approach_forbidden.count(t)) return false;
  if (carrying) {
    if (block_carry_v.count(vkey(t, v))) return false;
    auto r = timed_release.find(v);
    if (r != timed_release.end() && t < r->second) return false;
    auto pk = parked_carry.find(v);
    if (pk != parked_carry.end() && t >= pk->second) return false;
  }
  auto pa = parked_always.find(v);
  if (pa != parked_always.end() && t >= pa->second) return false;
  return true;
}

bool ConstraintTable::edge_ok(int u, int v, int t, bool carrying) const {
  if (block_agent_e.count(ekey(t, u, v))) return false;
  if (carrying && block_carry_e.count(ekey(t, u, v))) return false;
  return true;
}

int ConstraintTable::settle_earliest(int v) const {
  if (parked_always.count(v) || parked_carry.count(v)) return kInfTime;
  int earliest = 0;
  auto it = max_block_at.find(v);
  if (it != max_block_at.end()) earliest = std::max(earliest, it->second);
  auto r = timed_release.find(v);
  if (r != timed_release.end()) {
    if (r->second >= kInfTime) return kInfTime;
    earliest = std::max(earliest, r->second - 1);
  }
  if (home >= 0 && v == home && !approach_forbidden.empty())
    earliest = std::max(earliest,
                        *std::max_element(approach_forbidden.begin(),
                                          approach_forbidden.end()));
  for (const auto& [lt, lv] : landmarks)
    if (lv != v) earliest = std::max(earliest, lt);
  return earliest;
}

ConstraintTable build_table(const Problem& p,
                            const std::vector<Constraint>& constraints,
                            const std::vector<TimedConstraint>& timed,
                            EntityRef who, int horizon) {
  ConstraintTable tab;
  tab.horizon = horizon;
  const int me = entity_id(p, who);
  if (who.is_mover) {
    if (!p.assignment) throw ConfigError("mover table requires assignment");
    tab.home = p.movable_starts[(size_t)(*p.assignment)[(size_t)who.index]];
  }

  // a block on the mover's own obstacle footprint: pre-pickup the obstacle
  // sits at home, so the mover may not still be approaching at t; while
  // carrying, the pair may not stand on the blocked vertex
  auto block_obstacle = [&](int t, int v) {
    if (!who.is_mover) {
      tab.add_vertex_block(t, v, false);
      return;
    }
    if (v == tab.home) tab.approach_forbidden.insert(t);
    tab.add_vertex_block(t, v, true);
  };

  for (const auto& c : constraints) {
    if (c.entity == me) {
      if (c.positive) {
        if (c.is_edge) {
          tab.add_landmark(c.t - 1, c.u);
          tab.add_landmark(c.t, c.v);
        } else {
          tab.add_landmark(c.t, c.v);
        }
      } else {
        if (c.is_edge)
          tab.add_edge_block(c.t, c.u, c.v, false);
        else
          tab.add_vertex_block(c.t, c.v, false);
      }
    } else if (c.positive) {
      // implied negatives for everyone else, on both footprints
      if (c.is_edge) {
        tab.add_vertex_block(c.t - 1, c.u, false);
        tab.add_vertex_block(c.t, c.v, false);
        tab.add_edge_block(c.t, c.u, c.v, false);
        tab.add_edge_block(c.t, c.v, c.u, false);
        block_obstacle(c.t - 1, c.u);
        block_obstacle(c.t, c.v);
        if (who.is_mover) {
          tab.add_edge_block(c.t, c.u, c.v, true);
          tab.add_edge_block(c.t, c.v, c.u, true);
        }
      } else {
        tab.add_vertex_block(c.t, c.v, false);
        block_obstacle(c.t, c.v);
      }
    }
  }

  for (const auto& tc : timed) {
    if (who.is_mover && tc.vertex == tab.home) continue;  // own obstacle
    auto it = tab.timed_release.find(tc.vertex);
    if (it == tab.timed_release.end())
      tab.timed_release[tc.vertex] = tc.release_time;
    else
      it->second = std::max(it->second, tc.release_time);
    if (tc.release_time < kInfTime)
      tab.max_time = std::max(tab.max_time, tc.release_time);
  }
  for (int t : tab.approach_forbidden)
    tab.max_time = std::max(tab.max_time, t);

  // a landmark that is also negatively blocked is unsatisfiable
  if (!tab.infeasible) {
    for (const auto& [t, v] : tab.landmarks)
      if (tab.block_agent_v.count(ConstraintTable::vkey(t, v))) {
        tab.infeasible = true;
        tab.infeasible_reason =
            "landmark at t=" + std::to_string(t) + " is negatively blocked";
        break;
      }
  }
  return tab;
}

}  // namespace tmapf
