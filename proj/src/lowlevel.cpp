#include "tmapf/lowlevel.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>
#include <unordered_map>

namespace tmapf {

namespace {

constexpr int kPollInterval = 512;

std::vector<int> bfs_from(const Graph& g, int source, bool through_obstacles) {
  std::vector<int> dist((size_t)g.size(), kInfTime);
  std::deque<int> q;
  dist[(size_t)source] = 0;
  q.push_back(source);
  int nb[4];
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    const int n = g.neighbors(v, nb);
    for (int i = 0; i < n; ++i) {
      const int w = nb[i];
      if (!through_obstacles && !g.is_passable(w)) continue;
      if (dist[(size_t)w] != kInfTime) continue;
      dist[(size_t)w] = dist[(size_t)v] + 1;
      q.push_back(w);
    }
  }
  return dist;
}

}  // namespace

Deadline Deadline::after_seconds(double secs) {
  Deadline d;
  d.enabled = true;
  d.at = Clock::now() +
         std::chrono::duration_cast<Clock::duration>(
             std::chrono::duration<double>(secs));
  return d;
}

const std::vector<int>& DistanceMaps::to(int goal, bool through_obstacles) {
  auto& cache = through_obstacles ? air : ground;
  auto it = cache.find(goal);
  if (it == cache.end())
    it = cache.emplace(goal, bfs_from(*graph, goal, through_obstacles)).first;
  return it->second;
}

int bfs_distance(const Graph& g, int from, int to, bool through_obstacles) {
  return bfs_from(g, to, through_obstacles)[(size_t)from];
}

int graph_diameter(const Graph& g) {
  // air diameter of a full grid
  int diam = g.width - 1 + g.height - 1;
  // ground flavor can be longer around obstacle walls
  for (int v = 0; v < g.size(); ++v) {
    if (!g.is_passable(v)) continue;
    auto d = bfs_from(g, v, false);
    for (int w = 0; w < g.size(); ++w)
      if (d[(size_t)w] != kInfTime) diam = std::max(diam, d[(size_t)w]);
  }
  return diam;
}

int default_horizon(const Problem& p) {
  const int entities = std::max(1, p.num_entities() + p.num_movables());
  return p.graph.size() + entities * graph_diameter(p.graph);
}

// ---------------------------------------------------------------------------
// space-time A* for a single agent footprint

TimedPath spacetime_astar(const Graph& g, int start, int goal,
                          const ConstraintTable& table,
                          const std::vector<uint8_t>& hard_blocked,
                          DistanceMaps& dist, const SearchLimits& lim) {
  TimedPath out;
  if (table.infeasible) return out;
  if (hard_blocked[(size_t)start] || !table.vertex_ok(start, 0, true))
    return out;

  // cached ground distances stay admissible as long as the hard set covers
  // every impassable cell; otherwise fall back to a local map
  bool covers = true;
  for (int v = 0; v < g.size() && covers; ++v)
    if (!g.is_passable(v) && !hard_blocked[(size_t)v]) covers = false;
  std::vector<int> local;
  const std::vector<int>* h = nullptr;
  if (covers) {
    h = &dist.to(goal, false);
  } else {
    local = std::vector<int>((size_t)g.size(), kInfTime);
    std::deque<int> q;
    local[(size_t)goal] = 0;
    q.push_back(goal);
    int nb[4];
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      const int n = g.neighbors(v, nb);
      for (int i = 0; i < n; ++i)
        if (!hard_blocked[(size_t)nb[i]] &&
            local[(size_t)nb[i]] == kInfTime) {
          local[(size_t)nb[i]] = local[(size_t)v] + 1;
          q.push_back(nb[i]);
        }
    }
    h = &local;
  }
  if ((*h)[(size_t)start] >= kInfTime) return out;

  struct Entry {
    int f, g, wait, v, t;
    bool operator>(const Entry& o) const {
      return std::tie(f, g, wait, v) > std::tie(o.f, o.g, o.wait, o.v);
    }
  };
  struct Label {
    int g = -1;
    int parent_v = -1;
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  std::unordered_map<uint64_t, Label> labels;
  // beyond the last constrained timestep the table is time-invariant, so
  // states collapse onto one time layer and floods stay bounded
  const int clamp_t = table.max_time + 1;
  auto key = [&](int t, int v) {
    return ConstraintTable::vkey(std::min(t, clamp_t), v);
  };

  const int settle_goal = table.settle_earliest(goal);
  if (settle_goal >= kInfTime) return out;

  open.push({(*h)[(size_t)start], 0, 0, start, 0});
  labels[key(0, start)] = {0, -1};
  long long expansions = 0;
  int nb[5];
  while (!open.empty()) {
    const Entry cur = open.top();
    open.pop();
    if (labels[key(cur.t, cur.v)].g != cur.g) continue;  // stale
    ++expansions;
    if (lim.deadline && (expansions % kPollInterval) == 0 &&
        lim.deadline->expired()) {
      out.status = LowLevelStatus::timeout;
      if (lim.expansions) *lim.expansions += expansions;
      return out;
    }
    if (cur.v == goal && cur.t >= settle_goal &&
        cur.t >= table.max_landmark_t) {
      std::vector<int> path((size_t)cur.t + 1);
      int v = cur.v;
      for (int t = cur.t; t >= 0; --t) {
        path[(size_t)t] = v;
        v = labels[key(t, v)].parent_v;
      }
      out.status = LowLevelStatus::found;
      out.verts = std::move(path);
      if (lim.expansions) *lim.expansions += expansions;
      return out;
    }
    if (cur.t >= lim.horizon) continue;
    const int n = g.neighbors(cur.v, nb);
    nb[n] = cur.v;  // wait
    for (int i = 0; i <= n; ++i) {
      const int w = nb[i];
      const int t = cur.t + 1;
      if (hard_blocked[(size_t)w]) continue;
      if ((*h)[(size_t)w] >= kInfTime) continue;
      if (!table.vertex_ok(w, t, true)) continue;
      if (!table.edge_ok(cur.v, w, t, true)) continue;
      auto& lab = labels[key(t, w)];
      if (lab.g >= 0 && lab.g <= t) continue;
      lab = {t, cur.v};
      open.push({t + (*h)[(size_t)w], t, w == cur.v ? 1 : 0, w, t});
    }
  }
  if (lim.expansions) *lim.expansions += expansions;
  return out;  // infeasible
}

// ---------------------------------------------------------------------------
// mover searches: approach phase (under obstacles) + carrying tour

namespace {

struct MoverLabel {
  long long g = -1;
  int pickup = kInfTime;
  int parent_v = -1;
  uint8_t parent_phase = 0;
};

// eta searches skip obstacle-footprint blocks: they bound the pickup from
// above, never from below
bool approach_ok_for_eta(const ConstraintTable& tab, int v, int t) {
  auto lm = tab.landmarks.find(t);
  if (lm != tab.landmarks.end() && lm->second != v) return false;
  if (tab.block_agent_v.count(ConstraintTable::vkey(t, v))) return false;
  auto pa = tab.parked_always.find(v);
  if (pa != tab.parked_always.end() && t >= pa->second) return false;
  return true;
}

}  // namespace

int eta_lower_bound(const Problem& p, int mover, const ConstraintTable& table,
                    DistanceMaps& dist, const SearchLimits& lim) {
  if (table.infeasible) return kInfTime;
  const int start = p.mover_starts[(size_t)mover];
  const int home = table.home;
  assert(home >= 0);
  if (!approach_ok_for_eta(table, start, 0)) return kInfTime;
  if (start == home) return 0;

  const auto& h = dist.to(home, true);
  if (h[(size_t)start] >= kInfTime) return kInfTime;

  struct Entry {
    int f, v, t;
    bool operator>(const Entry& o) const {
      return std::tie(f, t, v) > std::tie(o.f, o.t, o.v);
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  std::unordered_map<uint64_t, int> best;
  const int clamp_t = table.max_time + 1;
  auto key = [&](int t, int v) {
    return ConstraintTable::vkey(std::min(t, clamp_t), v);
  };
  open.push({h[(size_t)start], start, 0});
  best[key(0, start)] = 0;
  long long expansions = 0;
  int nb[5];
  while (!open.empty()) {
    const Entry cur = open.top();
    open.pop();
    if (best[key(cur.t, cur.v)] != cur.t) continue;  // stale
    ++expansions;
    if (lim.deadline && (expansions % kPollInterval) == 0 &&
        lim.deadline->expired())
      break;
    if (cur.v == home) {
      if (lim.expansions) *lim.expansions += expansions;
      return cur.t;
    }
    if (cur.t >= lim.horizon) continue;
    const int n = p.graph.neighbors(cur.v, nb);
    nb[n] = cur.v;
    for (int i = 0; i <= n; ++i) {
      const int w = nb[i];
      const int t = cur.t + 1;
      if (!approach_ok_for_eta(table, w, t)) continue;
      if (table.block_agent_e.count(ConstraintTable::ekey(t, cur.v, w)))
        continue;
      auto it = best.find(key(t, w));
      if (it != best.end() && it->second <= t) continue;
      best[key(t, w)] = t;
      open.push({t + h[(size_t)w], w, t});
    }
  }
  if (lim.expansions) *lim.expansions += expansions;
  return kInfTime;
}

MoverPlan mover_lowlevel(const Problem& p, int mover,
                         const ConstraintTable& table, CostFn cost_fn,
                         DistanceMaps& dist, const SearchLimits& lim) {
  MoverPlan out;
  if (table.infeasible) return out;
  const int start = p.mover_starts[(size_t)mover];
  const int home = table.home;
  assert(home >= 0);
  const long long wa = cost_fn == CostFn::cost2 ? 1 : 0;

  const auto& d_air = dist.to(home, true);
  const auto& d_ground = dist.to(home, false);
  if (d_air[(size_t)start] >= kInfTime) return out;
  const int settle_home = table.settle_earliest(home);
  if (settle_home >= kInfTime) return out;

  // phase: 0 approaching, 1 carrying (first arrival at home picks up)
  auto heuristic = [&](int v, int phase) -> long long {
    if (phase == 1) return d_ground[(size_t)v];
    return wa * (long long)d_air[(size_t)v];
  };
  // lower bound on the final pickup timestep, for the tie-break
  auto pickup_bound = [&](int v, int t, int phase, int pick) {
    return phase == 1 ? pick : t + d_air[(size_t)v];
  };
  auto state_ok = [&](int v, int t, int phase) {
    if (phase == 1 && !p.graph.is_passable(v)) return false;
    return table.vertex_ok(v, t, phase == 1);
  };

  struct Entry {
    long long f;
    long long g;
    int pbound, t, v;
    uint8_t phase;
    int pick;  // label's pickup at push time, for staleness detection
    bool operator>(const Entry& o) const {
      return std::tie(f, g, pbound, t, v, phase) >
             std::tie(o.f, o.g, o.pbound, o.t, o.v, o.phase);
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  std::unordered_map<uint64_t, MoverLabel> labels;
  const int clamp_t = table.max_time + 1;
  auto skey = [&](int t, int v, int phase) {
    return (ConstraintTable::vkey(std::min(t, clamp_t), v) << 1) |
           (uint64_t)phase;
  };

  const int start_phase = start == home ? 1 : 0;
  const int start_pick = start_phase == 1 ? 0 : kInfTime;
  if (!state_ok(start, 0, start_phase)) return out;
  labels[skey(0, start, start_phase)] = {0, start_pick, -1, 0};
  open.push({heuristic(start, start_phase), 0,
             pickup_bound(start, 0, start_phase, start_pick), 0, start,
             (uint8_t)start_phase, start_pick});

  long long expansions = 0;
  int nb[5];
  while (!open.empty()) {
    const Entry cur = open.top();
    open.pop();
    {
      const auto& lab = labels[skey(cur.t, cur.v, cur.phase)];
      if (lab.g != cur.g || lab.pickup != cur.pick) continue;  // stale
    }
    ++expansions;
    if (lim.deadline && (expansions % kPollInterval) == 0 &&
        lim.deadline->expired()) {
      out.status = LowLevelStatus::timeout;
      if (lim.expansions) *lim.expansions += expansions;
      return out;
    }
    if (cur.phase == 1 && cur.v == home && cur.t >= settle_home &&
        cur.t >= table.max_landmark_t) {
      // reconstruct
      std::vector<int> path((size_t)cur.t + 1);
      int v = cur.v, phase = cur.phase;
      for (int t = cur.t; t >= 0; --t) {
        path[(size_t)t] = v;
        const auto& l = labels[skey(t, v, phase)];
        v = l.parent_v;
        phase = l.parent_phase;
      }
      out.status = LowLevelStatus::found;
      out.verts = std::move(path);
      out.pickup = labels[skey(cur.t, cur.v, 1)].pickup;
      for (size_t t = 1; t < out.verts.size(); ++t) {
        if (out.verts[t] == out.verts[t - 1]) continue;
        if ((int)t <= out.pickup)
          ++out.approach_moves;
        else
          ++out.carried_moves;
      }
      out.weighted_cost = cur.g;
      if (lim.expansions) *lim.expansions += expansions;
      return out;
    }
    if (cur.t >= lim.horizon) continue;
    const int cur_pick = labels[skey(cur.t, cur.v, cur.phase)].pickup;
    const int n = p.graph.neighbors(cur.v, nb);
    nb[n] = cur.v;
    for (int i = 0; i <= n; ++i) {
      const int w = nb[i];
      const int t = cur.t + 1;
      const int phase = (cur.phase == 1 || w == home) ? 1 : 0;
      if (!state_ok(w, t, phase)) continue;
      // the obstacle rides along only when the source state carries it
      if (!table.edge_ok(cur.v, w, t, cur.phase == 1)) continue;
      long long step = 0;
      if (w != cur.v) step = cur.phase == 1 ? 1 : wa;
      const long long ng = cur.g + step;
      const int npick =
          cur.phase == 0 && phase == 1 ? t : (phase == 1 ? cur_pick : kInfTime);
      auto& l = labels[skey(t, w, phase)];
      if (l.g >= 0 && (l.g < ng || (l.g == ng && l.pickup <= npick))) continue;
      l = {ng, npick, cur.v, cur.phase};
      open.push({ng + heuristic(w, phase), ng, pickup_bound(w, t, phase, npick),
                 t, w, (uint8_t)phase, npick});
    }
  }
  if (lim.expansions) *lim.expansions += expansions;
  return out;  // infeasible
}

}  // namespace tmapf
