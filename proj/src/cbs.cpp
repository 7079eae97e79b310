#include <cassert>
#include <deque>
#include <queue>
#include <tuple>

#include "tmapf/solver.hpp"

namespace tmapf {

namespace {

struct CTNode {
  int parent = -1;
  Constraint delta;  // unused for root
  std::vector<std::pair<int, EntityPath>> new_paths;
  std::vector<int> eta;  // per movable, lower bound on pickup
  long long cost = 0;
  int n_conflicts = 0;
  Conflict first;
  uint64_t seq = 0;
};

struct Cbs {
  const Problem& p;
  const SolveConfig& cfg;
  CostFn cost_fn;
  int horizon;
  Deadline deadline;
  DistanceMaps dist;
  std::vector<uint8_t> statics;
  std::deque<CTNode> nodes;
  SolveStats stats;
  bool timed_out = false;

  Cbs(const Problem& prob, const SolveConfig& c, CostFn f)
      : p(prob), cfg(c), cost_fn(f) {
    horizon = c.horizon > 0 ? c.horizon : default_horizon(p);
    if (c.timeout_secs > 0) deadline = Deadline::after_seconds(c.timeout_secs);
    dist.graph = &p.graph;
    statics.resize((size_t)p.graph.size());
    for (int v = 0; v < p.graph.size(); ++v)
      statics[(size_t)v] = p.graph.is_passable(v) ? 0 : 1;
  }

  EntityRef ref_of(int e) const {
    if (e < p.num_tasks()) return {false, e};
    return {true, e - p.num_tasks()};
  }

  std::vector<Constraint> collect_constraints(int idx) const {
    std::vector<Constraint> cs = cfg.initial_constraints;
    std::vector<Constraint> chain;
    for (int n = idx; n > 0; n = nodes[(size_t)n].parent)
      chain.push_back(nodes[(size_t)n].delta);
    cs.insert(cs.end(), chain.rbegin(), chain.rend());
    return cs;
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

  std::vector<TimedConstraint> timed_of(const std::vector<int>& eta) const {
    std::vector<TimedConstraint> out;
    for (int k = 0; k < p.num_movables(); ++k)
      if (eta[(size_t)k] > 0)
        out.push_back({p.movable_starts[(size_t)k], eta[(size_t)k]});
    return out;
  }

  long long marginal(int e, const EntityPath& path) const {
    if (e < p.num_tasks()) return path.end();
    return cost_fn == CostFn::cost2
               ? path.approach_moves + path.carried_moves
               : path.carried_moves;
  }

  bool path_violates(int e, const EntityPath& path,
                     const ConstraintTable& tab) const {
    if (tab.infeasible) return true;
    const bool mover = e >= p.num_tasks();
    for (int t = 0; t <= path.end(); ++t) {
      const int v = path.at(t);
      const bool carrying = !mover || (path.pickup >= 0 && t >= path.pickup);
      if (carrying && statics[(size_t)v]) return true;
      if (!tab.vertex_ok(v, t, carrying)) return true;
      if (t > 0) {
        const bool src_carry = !mover || (path.pickup >= 0 && t - 1 >= path.pickup);
        if (!tab.edge_ok(path.at(t - 1), v, t, src_carry)) return true;
      }
    }
    return tab.settle_earliest(path.at(path.end())) > path.end();
  }

  // returns found/infeasible/timeout plus the new path
  std::pair<LowLevelStatus, EntityPath> replan(
      int e, const std::vector<Constraint>& cs,
      const std::vector<int>& eta) {
    const EntityRef ref = ref_of(e);
    auto tab = build_table(p, cs, timed_of(eta), ref, horizon);
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

  void finalize(int idx, std::vector<EntityPath> paths, CTNode& node,
                const std::vector<Constraint>& cs) {
    node.new_paths.clear();
    if (idx < 0) {
      for (int e = 0; e < p.num_entities(); ++e)
        node.new_paths.emplace_back(e, paths[(size_t)e]);
    }
    long long total = 0;
    for (int e = 0; e < p.num_entities(); ++e)
      total += marginal(e, paths[(size_t)e]);
    node.cost = total;
    auto conflicts = detect_conflicts(p, paths);
    node.n_conflicts = (int)conflicts.size();
    if (!conflicts.empty()) node.first = conflicts.front();
    (void)cs;
  }

  // builds a child of nodes[parent]; false when the branch is dead
  bool make_child(int parent, const Constraint& c, CTNode& out) {
    out = CTNode{};
    out.parent = parent;
    out.delta = c;
    out.eta = nodes[(size_t)parent].eta;
    auto cs = collect_constraints(parent);
    cs.push_back(c);
    auto paths = collect_paths(parent);
    std::vector<std::pair<int, EntityPath>> replanned;
    for (int e = 0; e < p.num_entities(); ++e) {
      const EntityRef ref = ref_of(e);
      auto tab = build_table(p, cs, timed_of(out.eta), ref, horizon);
      if (!path_violates(e, paths[(size_t)e], tab)) continue;
      auto [status, np] = replan(e, cs, out.eta);
      if (status == LowLevelStatus::timeout) {
        timed_out = true;
        return false;
      }
      if (status == LowLevelStatus::infeasible) return false;
      paths[(size_t)e] = np;
      replanned.emplace_back(e, np);
      if (ref.is_mover) {
        auto tab2 = build_table(p, cs, {}, ref, horizon);
        SearchLimits lim{horizon, deadline.enabled ? &deadline : nullptr,
                         &stats.ll_expansions};
        out.eta[(size_t)(*p.assignment)[(size_t)ref.index]] =
            eta_lower_bound(p, ref.index, tab2, dist, lim);
      }
    }
    finalize(parent, paths, out, cs);
    out.new_paths = std::move(replanned);
    assert(out.cost >= nodes[(size_t)parent].cost);
    return true;
  }

  // the entity whose agent footprint sits at the conflict locus; task agents
  // come first so a task vs. mover conflict always constrains the task
  static int constrained_entity(const Conflict& c) {
    if (c.e1_agent) return c.e1;
    if (c.e2_agent) return c.e2;
    return c.e1;
  }

  Constraint constraint_for(const Conflict& c, int entity,
                            bool positive) const {
    Constraint out;
    out.positive = positive;
    out.entity = entity;
    out.t = c.t;
    if (c.kind == Conflict::Kind::vertex) {
      out.v = c.v;
    } else {
      out.is_edge = true;
      if (entity == c.e1) {
        out.u = c.u;
        out.v = c.v;
      } else {
        out.u = c.v;
        out.v = c.u;
      }
    }
    return out;
  }

  // Joint-position reachability for small instances. Proving infeasibility
  // by exhausting the constraint tree is exponential even on toy grids, so a
  // plain BFS over joint configurations settles feasibility first; -1 means
  // the instance is too large to decide here, otherwise the minimal makespan
  // or kInfTime.
  int joint_feasibility_makespan(long long cap) const {
    const int nt = p.num_tasks(), nm = p.num_movers();
    double estimate = 1.0;
    for (int j = 0; j < nm; ++j) estimate *= 2.0;
    for (int e = 0; e < nt + nm; ++e) {
      estimate *= (double)p.graph.size();
      if (estimate > (double)cap) return -1;
    }
    struct Key {
      std::vector<int> pos;  // tasks then movers
      uint32_t picked;
      bool operator==(const Key& o) const {
        return picked == o.picked && pos == o.pos;
      }
    };
    struct KeyHash {
      size_t operator()(const Key& k) const {
        size_t h = k.picked;
        for (int v : k.pos) h = h * 1000003u + (size_t)v;
        return h;
      }
    };
    auto obstacle_pos = [&](const Key& k, int j) {
      return (k.picked >> j) & 1
                 ? k.pos[(size_t)(nt + j)]
                 : p.movable_starts[(size_t)(*p.assignment)[(size_t)j]];
    };
    auto is_goal = [&](const Key& k) {
      for (int i = 0; i < nt; ++i)
        if (k.pos[(size_t)i] != p.task_agents[(size_t)i].goal) return false;
      for (int j = 0; j < nm; ++j)
        if (!((k.picked >> j) & 1) ||
            k.pos[(size_t)(nt + j)] !=
                p.movable_starts[(size_t)(*p.assignment)[(size_t)j]])
          return false;
      return true;
    };
    Key init;
    for (const auto& a : p.task_agents) init.pos.push_back(a.start);
    for (int j = 0; j < nm; ++j) init.pos.push_back(p.mover_starts[(size_t)j]);
    init.picked = 0;
    for (int j = 0; j < nm; ++j)
      if (init.pos[(size_t)(nt + j)] ==
          p.movable_starts[(size_t)(*p.assignment)[(size_t)j]])
        init.picked |= 1u << j;
    std::unordered_map<Key, int, KeyHash> depth;
    std::deque<Key> queue;
    depth[init] = 0;
    queue.push_back(init);
    while (!queue.empty()) {
      const Key cur = queue.front();
      queue.pop_front();
      const int d = depth[cur];
      if (is_goal(cur)) return d;
      if ((long long)depth.size() > cap) return -1;
      Key nxt = cur;
      auto place = [&](auto&& self, int e) -> void {
        if (e == nt + nm) {
          Key out = nxt;
          for (int j = 0; j < nm; ++j)
            if (!((out.picked >> j) & 1) &&
                out.pos[(size_t)(nt + j)] == obstacle_pos(out, j))
              out.picked |= 1u << j;
          if (depth.emplace(out, d + 1).second) queue.push_back(out);
          return;
        }
        const bool is_task = e < nt;
        const bool carrying = !is_task && ((cur.picked >> (e - nt)) & 1);
        const int from = cur.pos[(size_t)e];
        int nb[5];
        const int n = p.graph.neighbors(from, nb);
        nb[n] = from;
        for (int x = 0; x <= n; ++x) {
          const int w = nb[x];
          if ((is_task || carrying) && !p.graph.is_passable(w)) continue;
          bool ok = true;
          for (int o = 0; o < e && ok; ++o) {
            if (nxt.pos[(size_t)o] == w) ok = false;
            if (cur.pos[(size_t)o] != from && cur.pos[(size_t)o] == w &&
                nxt.pos[(size_t)o] == from)
              ok = false;
          }
          if (ok && (is_task || carrying)) {
            for (int j = 0; j < nm && ok; ++j)
              if (!((cur.picked >> j) & 1) && obstacle_pos(cur, j) == w)
                ok = false;
          }
          if (!ok) continue;
          nxt.pos[(size_t)e] = w;
          self(self, e + 1);
        }
        nxt.pos[(size_t)e] = from;
      };
      place(place, 0);
    }
    return kInfTime;
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

    const int makespan = joint_feasibility_makespan(200000);
    if (makespan == kInfTime) return finish(Outcome::infeasible);
    if (makespan > 0) horizon = std::max(horizon, 2 * makespan + 8);

    // root: etas first, then unconstrained (but timed-aware) plans
    CTNode root;
    root.parent = -1;
    root.eta.assign((size_t)p.num_movables(), 0);
    auto cs = cfg.initial_constraints;
    for (int j = 0; j < p.num_movers(); ++j) {
      auto tab = build_table(p, cs, {}, {true, j}, horizon);
      SearchLimits lim{horizon, deadline.enabled ? &deadline : nullptr,
                       &stats.ll_expansions};
      root.eta[(size_t)(*p.assignment)[(size_t)j]] =
          eta_lower_bound(p, j, tab, dist, lim);
    }
    std::vector<EntityPath> root_paths((size_t)p.num_entities());
    for (int e = 0; e < p.num_entities(); ++e) {
      auto [status, path] = replan(e, cs, root.eta);
      if (status == LowLevelStatus::timeout) return finish(Outcome::timeout);
      if (status == LowLevelStatus::infeasible)
        return finish(Outcome::infeasible);
      root_paths[(size_t)e] = path;
    }
    finalize(-1, root_paths, root, cs);
    root.seq = 0;
    nodes.push_back(std::move(root));

    using Key = std::tuple<long long, int, uint64_t>;
    std::priority_queue<std::pair<Key, int>, std::vector<std::pair<Key, int>>,
                        std::greater<>> open;
    uint64_t seq = 1;
    open.push({{nodes[0].cost, nodes[0].n_conflicts, nodes[0].seq}, 0});

    while (!open.empty()) {
      if (deadline.expired()) return finish(Outcome::timeout);
      const int cur = open.top().second;
      open.pop();
      ++stats.hl_expansions;
      if (nodes[(size_t)cur].n_conflicts == 0) {
        res.solution = assemble_solution(p, collect_paths(cur));
        res.cost = nodes[(size_t)cur].cost;
        return finish(Outcome::solved);
      }
      const Conflict confl = nodes[(size_t)cur].first;
      const int entity = constrained_entity(confl);
      for (bool positive : {true, false}) {
        CTNode child;
        if (!make_child(cur, constraint_for(confl, entity, positive), child)) {
          if (timed_out) return finish(Outcome::timeout);
          continue;
        }
        child.seq = seq++;
        const Key key{child.cost, child.n_conflicts, child.seq};
        nodes.push_back(std::move(child));
        open.push({key, (int)nodes.size() - 1});
      }
    }
    return finish(Outcome::infeasible);
  }
};

}  // namespace

SolveResult cbs_solve(const Problem& p, const SolveConfig& cfg) {
  if (!p.is_mapf())
    throw ConfigError("cbs solves MAPF instances; use tfcbs or to_static()");
  Problem q = p;
  q.assignment = std::vector<int>{};
  Cbs cbs(q, cfg, CostFn::soc);
  return cbs.run();
}

SolveResult tfcbs_solve(const Problem& p, const SolveConfig& cfg) {
  Problem q = p;
  if (!q.assignment) q.assignment = assign_movers(q);
  Cbs cbs(q, cfg, cfg.cost == CostFn::soc ? CostFn::cost1 : cfg.cost);
  SolveResult res = cbs.run();
  return res;
}

}  // namespace tmapf
