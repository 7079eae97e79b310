#include "tmapf/pbs.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <tuple>

namespace tmapf {

std::vector<int> topological_order(
    const std::vector<std::pair<int, int>>& priorities, int n_entities) {
  std::vector<std::set<int>> succ((size_t)n_entities);
  std::vector<int> indeg((size_t)n_entities, 0);
  std::vector<char> mentioned((size_t)n_entities, 0);
  for (auto [hi, lo] : priorities) {
    mentioned[(size_t)hi] = mentioned[(size_t)lo] = 1;
    if (succ[(size_t)hi].insert(lo).second) ++indeg[(size_t)lo];
  }
  std::vector<int> order;
  std::set<int> ready;
  for (int e = 0; e < n_entities; ++e)
    if (mentioned[(size_t)e] && indeg[(size_t)e] == 0) ready.insert(e);
  while (!ready.empty()) {
    const int e = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(e);
    for (int s : succ[(size_t)e])
      if (--indeg[(size_t)s] == 0) ready.insert(s);
  }
  for (int e = 0; e < n_entities; ++e)
    if (mentioned[(size_t)e] && indeg[(size_t)e] > 0)
      throw CycleError("priority set contains a cycle");
  for (int e = 0; e < n_entities; ++e)
    if (!mentioned[(size_t)e]) order.push_back(e);
  return order;
}

bool paths_conflict(const Problem& p, int e1, const EntityPath& a, int e2,
                    const EntityPath& b) {
  const int nt = p.num_tasks();
  struct Fp {
    int entity;
    bool agent;
    const EntityPath* path;
  };
  std::vector<Fp> fa, fb;
  fa.push_back({e1, true, &a});
  if (e1 >= nt) fa.push_back({e1, false, &a});
  fb.push_back({e2, true, &b});
  if (e2 >= nt) fb.push_back({e2, false, &b});
  auto pos = [&](const Fp& f, int t) {
    if (f.agent) return f.path->at(t);
    return obstacle_at(p, *f.path, f.entity - nt, t);
  };
  const int horizon = std::max(a.end(), b.end());
  for (int t = 0; t <= horizon; ++t) {
    for (const auto& x : fa)
      for (const auto& y : fb) {
        bool check_vertex = true;
        if (x.agent != y.agent) {
          const auto& ag = x.agent ? x : y;
          if (ag.entity >= nt) check_vertex = false;
        }
        if (check_vertex && pos(x, t) == pos(y, t)) return true;
        if (t > 0 && pos(x, t - 1) != pos(y, t - 1) &&
            pos(x, t - 1) == pos(y, t) && pos(y, t - 1) == pos(x, t))
          return true;
      }
  }
  return false;
}

namespace {

struct PTNode {
  int parent = -1;
  std::pair<int, int> delta{-1, -1};  // hi before lo
  std::vector<std::pair<int, EntityPath>> new_paths;
  long long cost = 0;
  int n_conflicts = 0;
  Conflict first;
};

struct Pbs {
  const Problem& p;
  const SolveConfig& cfg;
  CostFn cost_fn;
  bool transitive;
  int horizon;
  Deadline deadline;
  DistanceMaps dist;
  std::vector<uint8_t> statics;
  std::deque<PTNode> nodes;
  SolveStats stats;
  bool timed_out = false;

  Pbs(const Problem& prob, const SolveConfig& c, CostFn f, bool trans)
      : p(prob), cfg(c), cost_fn(f), transitive(trans) {
    horizon = c.horizon > 0 ? c.horizon : default_horizon(p);
    if (c.timeout_secs > 0) deadline = Deadline::after_seconds(c.timeout_secs);
    dist.graph = &p.graph;
    statics.resize((size_t)p.graph.size());
    for (int v = 0; v < p.graph.size(); ++v)
      statics[(size_t)v] = p.graph.is_passable(v) ? 0 : 1;
  }

  std::vector<std::pair<int, int>> collect_pairs(int idx) const {
    std::vector<std::pair<int, int>> out = cfg.initial_priorities;
    std::vector<std::pair<int, int>> chain;
    for (int n = idx; n > 0; n = nodes[(size_t)n].parent)
      chain.push_back(nodes[(size_t)n].delta);
    out.insert(out.end(), chain.rbegin(), chain.rend());
    return out;
  }

  std::vector<EntityPath> collect_paths(int idx) const {
    std::vector<EntityPath> paths((size_t)p.num_entities());
    std::vector<char> got((size_t)p.num_entities(), 0);
    for (int n = idx; n >= 0; n = nodes[(size_t)n].parent)
      for (const auto& [e, path] : nodes[(size_t)n].new_paths)
        if (!got[(size_t)e]) {
          got[(size_t)e] = 1;
          paths[(size_t)e] = path;
        }
    return paths;
  }

  long long marginal(int e, const EntityPath& path) const {
    if (e < p.num_tasks()) return path.end();
    return cost_fn == CostFn::cost2
               ? path.approach_moves + path.carried_moves
               : path.carried_moves;
  }

  // Pickup-derived timed constraints from the node's current mover paths.
  // The home vertex is physically occupied through the pickup timestep
  // itself, so the release is pickup+1 (the first timestep it can be free).
  std::vector<TimedConstraint> timed_of(
      const std::vector<EntityPath>& paths) const {
    std::vector<TimedConstraint> out;
    for (int j = 0; j < p.num_movers(); ++j) {
      const auto& mp = paths[(size_t)(p.num_tasks() + j)];
      if (mp.pickup >= 0 && mp.pickup < kInfTime)
        out.push_back({p.movable_starts[(size_t)(*p.assignment)[(size_t)j]],
                       mp.pickup + 1});
    }
    return out;
  }

  ConstraintTable avoid_table(const std::vector<EntityPath>& paths,
                              const std::vector<int>& avoid, EntityRef me,
                              const std::vector<TimedConstraint>& timed) {
    ConstraintTable tab;
    tab.horizon = horizon;
    const int nt = p.num_tasks();
    if (me.is_mover)
      tab.home = p.movable_starts[(size_t)(*p.assignment)[(size_t)me.index]];

    auto block_agent_traj = [&](const EntityPath& path, bool hits_obstacles) {
      for (int t = 0; t <= path.end(); ++t) {
        const int v = path.at(t);
        tab.add_vertex_block(t, v, false);
        // a task agent on the home vertex means the obstacle must be gone
        if (hits_obstacles && me.is_mover && v == tab.home) {
          tab.approach_forbidden.insert(t);
          tab.add_vertex_block(t, v, true);
        }
      }
      for (int t = 1; t <= path.end(); ++t)
        if (path.at(t) != path.at(t - 1))
          tab.add_edge_block(t, path.at(t), path.at(t - 1), false);
      tab.add_parked(path.at(path.end()), path.end(), false);
      if (hits_obstacles && me.is_mover &&
          path.at(path.end()) == tab.home) {
        tab.infeasible = true;
        tab.infeasible_reason = "higher-priority task parks on home";
      }
    };
    auto block_obstacle_traj = [&](const EntityPath& path, int mover) {
      for (int t = 0; t <= path.end(); ++t) {
        const int v = obstacle_at(p, path, mover, t);
        tab.add_vertex_block(t, v, true);
        if (me.is_mover && v == tab.home) tab.approach_forbidden.insert(t);
      }
      for (int t = 1; t <= path.end(); ++t) {
        const int v = obstacle_at(p, path, mover, t);
        const int u = obstacle_at(p, path, mover, t - 1);
        if (u != v) tab.add_edge_block(t, v, u, false);  // swaps bind always
      }
      const int fin = obstacle_at(p, path, mover, path.end());
      tab.add_parked(fin, path.end(), true);
      if (me.is_mover && fin == tab.home) {
        tab.infeasible = true;
        tab.infeasible_reason = "higher-priority obstacle parks on home";
      }
    };

    for (int x : avoid) {
      const auto& path = paths[(size_t)x];
      block_agent_traj(path, x < nt);
      if (x >= nt) block_obstacle_traj(path, x - nt);
    }
    for (const auto& tc : timed) {
      if (me.is_mover && tc.vertex == tab.home) continue;
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
    return tab;
  }

  // explicit predecessors (direct mode) or closure predecessors
  // (transitive), filtered to entities that already hold a plan
  std::vector<int> predecessors_of(int e,
                                   const std::vector<std::pair<int, int>>& ps,
                                   const std::vector<char>& planned) const {
    const int ne = p.num_entities();
    std::vector<char> pred((size_t)ne, 0);
    if (!transitive) {
      for (auto [h, l] : ps)
        if (l == e) pred[(size_t)h] = 1;
    } else {
      std::vector<int> stack{e};
      std::vector<char> seen((size_t)ne, 0);
      seen[(size_t)e] = 1;
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (auto [h, l] : ps)
          if (l == x && !seen[(size_t)h]) {
            seen[(size_t)h] = 1;
            pred[(size_t)h] = 1;
            stack.push_back(h);
          }
      }
    }
    std::vector<int> out;
    for (int x = 0; x < ne; ++x)
      if (pred[(size_t)x] && planned[(size_t)x]) out.push_back(x);
    return out;
  }

  std::pair<LowLevelStatus, EntityPath> replan(
      int e, const std::vector<EntityPath>& paths,
      const std::vector<int>& avoid) {
    const int nt = p.num_tasks();
    const EntityRef ref{e >= nt, e >= nt ? e - nt : e};
    const auto timed = p.num_movers() > 0 ? timed_of(paths)
                                          : std::vector<TimedConstraint>{};
    auto tab = avoid_table(paths, avoid, ref, timed);
    SearchLimits lim{horizon, deadline.enabled ? &deadline : nullptr,
                     &stats.ll_expansions};
    EntityPath out;
    if (!ref.is_mover) {
      auto r = spacetime_astar(p.graph, p.task_agents[(size_t)e].start,
                               p.task_agents[(size_t)e].goal, tab, statics,
                               dist, lim);
      out.verts = std::move(r.verts);
      return {r.status, out};
    }
    auto r = mover_lowlevel(p, ref.index, tab, cost_fn, dist, lim);
    out.verts = std::move(r.verts);
    out.pickup = r.pickup;
    out.approach_moves = r.approach_moves;
    out.carried_moves = r.carried_moves;
    return {r.status, out};
  }

  void evaluate(PTNode& node, const std::vector<EntityPath>& paths) {
    long long total = 0;
    for (int e = 0; e < p.num_entities(); ++e)
      total += marginal(e, paths[(size_t)e]);
    node.cost = total;
    auto conflicts = detect_conflicts(p, paths);
    node.n_conflicts = (int)conflicts.size();
    if (!conflicts.empty()) node.first = conflicts.front();
  }

  // child of nodes[parent] adding pair (hi before lo); false when dead
  bool make_child(int parent, int hi, int lo, PTNode& out) {
    out = PTNode{};
    out.parent = parent;
    out.delta = {hi, lo};
    auto pairs = collect_pairs(parent);
    pairs.emplace_back(hi, lo);
    auto paths = collect_paths(parent);

    if (!transitive) {
      // direct prioritization: replan only the demoted entity against its
      // explicitly ranked superiors
      std::vector<int> avoid;
      for (auto [h, l] : pairs)
        if (l == lo) avoid.push_back(h);
      std::sort(avoid.begin(), avoid.end());
      avoid.erase(std::unique(avoid.begin(), avoid.end()), avoid.end());
      auto [status, np] = replan(lo, paths, avoid);
      if (status == LowLevelStatus::timeout) {
        timed_out = true;
        return false;
      }
      if (status == LowLevelStatus::infeasible) return false;
      paths[(size_t)lo] = np;
      out.new_paths.emplace_back(lo, np);
      evaluate(out, paths);
      return true;
    }

    // transitive (classic) mode: topological replan cascade
    const int ne = p.num_entities();
    std::vector<int> order;
    try {
      order = topological_order(pairs, ne);
    } catch (const CycleError&) {
      return false;
    }
    // transitive closure of the priority relation
    std::vector<std::vector<char>> above(
        (size_t)ne, std::vector<char>((size_t)ne, 0));
    for (auto [h, l] : pairs) above[(size_t)l][(size_t)h] = 1;
    for (int k = 0; k < ne; ++k)
      for (int i = 0; i < ne; ++i)
        if (above[(size_t)i][(size_t)k])
          for (int j = 0; j < ne; ++j)
            if (above[(size_t)k][(size_t)j]) above[(size_t)i][(size_t)j] = 1;

    std::vector<char> changed((size_t)ne, 0);
    changed[(size_t)lo] = 1;
    for (int e : order) {
      bool needs = e == lo;
      if (!needs) {
        for (int x = 0; x < ne && !needs; ++x)
          if (changed[(size_t)x] && above[(size_t)e][(size_t)x] &&
              paths_conflict(p, e, paths[(size_t)e], x, paths[(size_t)x]))
            needs = true;
      }
      if (!needs) continue;
      std::vector<int> avoid;
      for (int x = 0; x < ne; ++x)
        if (above[(size_t)e][(size_t)x]) avoid.push_back(x);
      auto [status, np] = replan(e, paths, avoid);
      if (status == LowLevelStatus::timeout) {
        timed_out = true;
        return false;
      }
      if (status == LowLevelStatus::infeasible) return false;
      paths[(size_t)e] = np;
      out.new_paths.emplace_back(e, np);
      changed[(size_t)e] = 1;
    }
    evaluate(out, paths);
    return true;
  }

  SolveResult run() {
    const auto t0 = Clock::now();
    SolveResult res;
    auto finish = [&](Outcome o) {
      res.outcome = o;
      res.stats = stats;
      res.stats.wall_ms =
          std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      return res;
    };

    // root: plans honoring any pre-seeded priorities; mover pickups (or eta
    // bounds before a mover is planned) seed the timed constraints
    PTNode root;
    std::vector<EntityPath> paths((size_t)p.num_entities());
    const int nt = p.num_tasks();
    const int ne = p.num_entities();
    std::vector<int> eta((size_t)p.num_movers(), 0);
    for (int j = 0; j < p.num_movers(); ++j) {
      auto tab = avoid_table(paths, {}, {true, j}, {});
      SearchLimits lim{horizon, deadline.enabled ? &deadline : nullptr,
                       &stats.ll_expansions};
      eta[(size_t)j] = eta_lower_bound(p, j, tab, dist, lim);
      if (eta[(size_t)j] >= kInfTime) return finish(Outcome::no_solution);
    }
    auto root_timed = [&]() {
      std::vector<TimedConstraint> out;
      for (int j = 0; j < p.num_movers(); ++j) {
        const auto& mp = paths[(size_t)(nt + j)];
        const int release =
            mp.verts.empty() ? eta[(size_t)j] + 1 : mp.pickup + 1;
        out.push_back(
            {p.movable_starts[(size_t)(*p.assignment)[(size_t)j]], release});
      }
      return out;
    };
    std::vector<int> order;
    try {
      order = topological_order(cfg.initial_priorities, ne);
    } catch (const CycleError&) {
      if (transitive) return finish(Outcome::no_solution);
      order.resize((size_t)ne);  // direct mode tolerates cycles
      for (int e = 0; e < ne; ++e) order[(size_t)e] = e;
    }
    std::vector<char> planned((size_t)ne, 0);
    for (int e : order) {
      std::vector<int> avoid =
          predecessors_of(e, cfg.initial_priorities, planned);
      const EntityRef ref{e >= nt, e >= nt ? e - nt : e};
      auto tab = avoid_table(paths, avoid, ref, root_timed());
      SearchLimits lim{horizon, deadline.enabled ? &deadline : nullptr,
                       &stats.ll_expansions};
      if (ref.is_mover) {
        auto r = mover_lowlevel(p, ref.index, tab, cost_fn, dist, lim);
        if (r.status == LowLevelStatus::timeout)
          return finish(Outcome::timeout);
        if (r.status == LowLevelStatus::infeasible)
          return finish(Outcome::no_solution);
        auto& ep = paths[(size_t)e];
        ep.verts = std::move(r.verts);
        ep.pickup = r.pickup;
        ep.approach_moves = r.approach_moves;
        ep.carried_moves = r.carried_moves;
      } else {
        auto r = spacetime_astar(p.graph, p.task_agents[(size_t)e].start,
                                 p.task_agents[(size_t)e].goal, tab, statics,
                                 dist, lim);
        if (r.status == LowLevelStatus::timeout)
          return finish(Outcome::timeout);
        if (r.status == LowLevelStatus::infeasible)
          return finish(Outcome::no_solution);
        paths[(size_t)e].verts = std::move(r.verts);
      }
      planned[(size_t)e] = 1;
    }
    for (int e = 0; e < ne; ++e)
      root.new_paths.emplace_back(e, paths[(size_t)e]);
    evaluate(root, paths);
    nodes.push_back(std::move(root));

    std::vector<int> stack{0};
    while (!stack.empty()) {
      if (deadline.expired()) return finish(Outcome::timeout);
      const int cur = stack.back();
      stack.pop_back();
      ++stats.hl_expansions;
      if (nodes[(size_t)cur].n_conflicts == 0) {
        res.solution = assemble_solution(p, collect_paths(cur));
        res.cost = nodes[(size_t)cur].cost;
        return finish(Outcome::solved);
      }
      const Conflict confl = nodes[(size_t)cur].first;
      const auto pairs = collect_pairs(cur);
      auto have_pair = [&](int h, int l) {
        return std::find(pairs.begin(), pairs.end(), std::make_pair(h, l)) !=
               pairs.end();
      };
      struct Cand {
        bool ok = false;
        PTNode node;
      };
      Cand a, b;  // a: e1 before e2 (replan e2); b: the reverse
      if (!have_pair(confl.e1, confl.e2)) {
        a.ok = make_child(cur, confl.e1, confl.e2, a.node);
        if (timed_out) return finish(Outcome::timeout);
      }
      if (!have_pair(confl.e2, confl.e1)) {
        b.ok = make_child(cur, confl.e2, confl.e1, b.node);
        if (timed_out) return finish(Outcome::timeout);
      }
      // expand the cheaper child first; ties prefer demoting the entity
      // whose current path is already the more expensive one
      bool a_first;
      if (a.ok != b.ok) {
        a_first = a.ok;
      } else if (a.node.cost != b.node.cost) {
        a_first = a.node.cost < b.node.cost;
      } else {
        const auto parent_paths = collect_paths(cur);
        const long long m1 = marginal(confl.e1, parent_paths[(size_t)confl.e1]);
        const long long m2 = marginal(confl.e2, parent_paths[(size_t)confl.e2]);
        a_first = m2 >= m1;  // lexicographic fallback keeps (e1 before e2)
      }
      auto push = [&](Cand& c) {
        if (!c.ok) return;
        nodes.push_back(std::move(c.node));
        stack.push_back((int)nodes.size() - 1);
      };
      if (a_first) {
        push(b);
        push(a);
      } else {
        push(a);
        push(b);
      }
    }
    return finish(Outcome::no_solution);
  }
};

}  // namespace

SolveResult pbs_solve(const Problem& p, const SolveConfig& cfg) {
  if (!p.is_mapf())
    throw ConfigError("pbs solves MAPF instances; use tfpbs or to_static()");
  Problem q = p;
  q.assignment = std::vector<int>{};
  Pbs pbs(q, cfg, CostFn::soc, true);
  return pbs.run();
}

SolveResult tfpbs_solve(const Problem& p, const SolveConfig& cfg) {
  Problem q = p;
  if (!q.assignment) q.assignment = assign_movers(q);
  Pbs pbs(q, cfg, cfg.cost == CostFn::soc ? CostFn::cost1 : cfg.cost,
          cfg.transitive);
  return pbs.run();
}

}  // namespace tmapf
