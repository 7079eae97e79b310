#include "tmapf/conflicts.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace tmapf {

int obstacle_at(const Problem& p, const EntityPath& path, int mover, int t) {
  const int home = p.movable_starts[(size_t)(*p.assignment)[(size_t)mover]];
  if (path.pickup < 0 || t < path.pickup) return home;
  return path.at(t);
}

namespace {

struct Footprint {
  int entity;
  bool agent;  // false: obstacle footprint of a mover entity
  int mover;   // mover index when the owner is a mover entity, else -1
};

}  // namespace

std::vector<Conflict> detect_conflicts(const Problem& p,
                                       const std::vector<EntityPath>& paths) {
  const int nt = p.num_tasks();
  const int ne = (int)paths.size();
  int horizon = 0;
  for (const auto& path : paths) horizon = std::max(horizon, path.end());

  std::vector<Footprint> fps;
  for (int e = 0; e < ne; ++e) {
    const bool is_mover = e >= nt;
    fps.push_back({e, true, is_mover ? e - nt : -1});
    if (is_mover) fps.push_back({e, false, e - nt});
  }
  auto pos = [&](const Footprint& f, int t) {
    if (f.agent) return paths[(size_t)f.entity].at(t);
    return obstacle_at(p, paths[(size_t)f.entity], f.mover, t);
  };
  auto carrying = [&](const Footprint& f, int t) {
    const auto& path = paths[(size_t)f.entity];
    return path.pickup >= 0 && t >= path.pickup;
  };

  std::set<std::tuple<int, int, int, int, int, int>> seen;  // dedupe key
  std::vector<Conflict> out;
  auto emit = [&](Conflict c) {
    if (c.e1 > c.e2) {
      std::swap(c.e1, c.e2);
      std::swap(c.e1_agent, c.e2_agent);
      if (c.kind == Conflict::Kind::edge) std::swap(c.u, c.v);
    }
    auto k = std::make_tuple((int)c.kind, c.e1, c.e2, c.t, c.u, c.v);
    if (seen.insert(k).second) out.push_back(c);
  };

  for (int t = 0; t <= horizon; ++t) {
    for (size_t i = 0; i < fps.size(); ++i) {
      for (size_t j = i + 1; j < fps.size(); ++j) {
        const auto& a = fps[i];
        const auto& b = fps[j];
        if (a.entity == b.entity) continue;
        // vertex sharing: agent/agent always conflicts; a mover's agent may
        // share with an obstacle (it collides via its own obstacle footprint
        // when carrying, which the obstacle/obstacle pair covers)
        bool check_vertex = true;
        if (a.agent != b.agent) {
          const auto& ag = a.agent ? a : b;
          if (ag.mover >= 0) check_vertex = false;
        }
        const int pa = pos(a, t), pb = pos(b, t);
        if (check_vertex && pa == pb) {
          Conflict c;
          c.kind = Conflict::Kind::vertex;
          c.e1 = a.entity;
          c.e2 = b.entity;
          c.v = pa;
          c.t = t;
          c.e1_agent = a.agent || carrying(a, t);
          c.e2_agent = b.agent || carrying(b, t);
          emit(c);
        }
        // swaps are forbidden between every footprint pair
        if (t > 0) {
          const int qa = pos(a, t - 1), qb = pos(b, t - 1);
          if (qa != qb && qa == pb && qb == pa) {
            Conflict c;
            c.kind = Conflict::Kind::edge;
            c.e1 = a.entity;
            c.e2 = b.entity;
            c.u = qa;
            c.v = pa;
            c.t = t;
            c.e1_agent = a.agent || carrying(a, t);
            c.e2_agent = b.agent || carrying(b, t);
            emit(c);
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Conflict& a, const Conflict& b) {
    return std::tie(a.t, a.e1, a.e2, a.kind, a.v, a.u) <
           std::tie(b.t, b.e1, b.e2, b.kind, b.v, b.u);
  });
  return out;
}

}  // namespace tmapf
