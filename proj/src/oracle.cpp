#include "tmapf/oracle.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace tmapf {

Certificate certify(const Problem& p, const Solution& sol, Mode mode) {
  if (sol.empty()) throw ParseError("solution has no states");
  for (const auto& s : sol.states)
    if ((int)s.tasks.size() != p.num_tasks() ||
        (int)s.movers.size() != p.num_movers() ||
        (int)s.obstacles.size() != p.num_movables())
      throw ParseError("state dimensions do not match the problem");

  Certificate cert;
  auto add = [&](const ValidityReport& r) {
    if (!r.ok) {
      cert.ok = false;
      cert.violations.insert(cert.violations.end(), r.violations.begin(),
                             r.violations.end());
    }
  };
  auto flag = [&](const char* rule, int t, const std::string& detail) {
    cert.ok = false;
    cert.violations.push_back({rule, t, detail});
  };

  for (int t = 0; t < sol.length(); ++t)
    add(validate_state(p, sol.states[(size_t)t], mode));
  for (int t = 1; t < sol.length(); ++t)
    add(validate_transition(p, sol.states[(size_t)t - 1],
                            sol.states[(size_t)t], mode));

  // boundary conditions
  const State& first = sol.states.front();
  const State& last = sol.states.back();
  for (int i = 0; i < p.num_tasks(); ++i) {
    if (first.tasks[(size_t)i] != p.task_agents[(size_t)i].start)
      flag("start", 0, "task " + std::to_string(i) + " start mismatch");
    if (last.tasks[(size_t)i] != p.task_agents[(size_t)i].goal)
      flag("goal", sol.length() - 1,
           "task " + std::to_string(i) + " not at goal");
  }
  if (mode == Mode::tmapf) {
    for (int j = 0; j < p.num_movers(); ++j)
      if (first.movers[(size_t)j] != p.mover_starts[(size_t)j])
        flag("start", 0, "mover " + std::to_string(j) + " start mismatch");
    for (int k = 0; k < p.num_movables(); ++k) {
      if (first.obstacles[(size_t)k] != p.movable_starts[(size_t)k])
        flag("start", 0, "movable " + std::to_string(k) + " start mismatch");
      if (last.obstacles[(size_t)k] != p.movable_starts[(size_t)k])
        flag("obstacle-restore", sol.length() - 1,
             "movable " + std::to_string(k) + " not restored");
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------

namespace {

struct JointState {
  std::vector<int> pos;        // tasks, movers, obstacles
  std::vector<char> settled;   // per task: committed at goal
  std::vector<char> picked;    // per mover

  bool operator==(const JointState& o) const {
    return pos == o.pos && settled == o.settled && picked == o.picked;
  }
};

struct JointHash {
  size_t operator()(const JointState& s) const {
    size_t h = 0xcbf29ce484222325ull;
    auto mix = [&](size_t x) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (int v : s.pos) mix((size_t)v);
    for (char c : s.settled) mix((size_t)c);
    for (char c : s.picked) mix((size_t)c);
    return h;
  }
};

}  // namespace

OracleResult brute_force_optimal(const Problem& p, Mode mode, CostFn cost,
                                 long long state_cap) {
  OracleResult res;
  const int nt = p.num_tasks();
  const int nm = mode == Mode::tmapf ? p.num_movers() : 0;
  const int nk = mode == Mode::tmapf ? p.num_movables() : 0;
  std::vector<int> assign;
  if (nm > 0) {
    if (!p.assignment) throw ConfigError("oracle requires an assignment");
    assign = *p.assignment;
  }
  std::vector<int> obstacle_of_mover(nm);
  for (int j = 0; j < nm; ++j) obstacle_of_mover[(size_t)j] = assign[(size_t)j];

  const Graph& g = p.graph;
  JointState init;
  init.pos.reserve((size_t)(nt + nm + nk));
  for (const auto& a : p.task_agents) init.pos.push_back(a.start);
  for (int j = 0; j < nm; ++j) init.pos.push_back(p.mover_starts[(size_t)j]);
  for (int k = 0; k < nk; ++k) init.pos.push_back(p.movable_starts[(size_t)k]);
  init.settled.assign((size_t)nt, 0);
  init.picked.assign((size_t)nm, 0);
  for (int j = 0; j < nm; ++j)
    init.picked[(size_t)j] =
        p.mover_starts[(size_t)j] ==
        p.movable_starts[(size_t)obstacle_of_mover[(size_t)j]];

  auto is_goal = [&](const JointState& s) {
    for (int i = 0; i < nt; ++i)
      if (!s.settled[(size_t)i]) return false;
    for (int j = 0; j < nm; ++j)
      if (!s.picked[(size_t)j]) return false;
    for (int k = 0; k < nk; ++k)
      if (s.pos[(size_t)(nt + nm + k)] != p.movable_starts[(size_t)k])
        return false;
    return true;
  };

  struct Node {
    long long cost;
    long long id;
    bool operator>(const Node& o) const {
      return std::tie(cost, id) > std::tie(o.cost, o.id);
    }
  };
  std::unordered_map<JointState, long long, JointHash> index;
  std::vector<JointState> states;
  std::vector<long long> best;
  std::vector<long long> parent;
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;

  auto intern = [&](const JointState& s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    const long long id = (long long)states.size();
    index.emplace(s, id);
    states.push_back(s);
    best.push_back(-1);
    parent.push_back(-1);
    return id;
  };

  // initial commit choices for tasks that start on their goal
  std::vector<long long> roots;
  {
    std::vector<int> at_goal;
    for (int i = 0; i < nt; ++i)
      if (p.task_agents[(size_t)i].start == p.task_agents[(size_t)i].goal)
        at_goal.push_back(i);
    const int subsets = 1 << at_goal.size();
    for (int m = 0; m < subsets; ++m) {
      JointState s = init;
      for (size_t b = 0; b < at_goal.size(); ++b)
        if (m & (1 << b)) s.settled[(size_t)at_goal[b]] = 1;
      roots.push_back(intern(s));
    }
  }
  for (long long r : roots) {
    best[(size_t)r] = 0;
    open.push({0, r});
  }

  int nb[5];
  std::vector<std::vector<int>> choice;  // per entity moves
  while (!open.empty()) {
    const auto [ccost, cid] = open.top();
    open.pop();
    if (ccost != best[(size_t)cid]) continue;
    const JointState cur = states[(size_t)cid];

    if (is_goal(cur)) {
      res.status = OracleResult::Status::optimal;
      res.cost = ccost;
      res.states_explored = (long long)states.size();
      Solution sol;
      std::vector<long long> chain;
      for (long long n = cid; n >= 0; n = parent[(size_t)n]) chain.push_back(n);
      std::reverse(chain.begin(), chain.end());
      for (size_t t = 0; t < chain.size(); ++t) {
        const auto& js = states[(size_t)chain[t]];
        State st;
        st.time = (int)t;
        st.tasks.assign(js.pos.begin(), js.pos.begin() + nt);
        st.movers.assign(js.pos.begin() + nt, js.pos.begin() + nt + nm);
        st.obstacles.assign(js.pos.begin() + nt + nm, js.pos.end());
        sol.states.push_back(std::move(st));
      }
      res.witness = std::move(sol);
      return res;
    }

    if ((long long)states.size() > state_cap) {
      res.status = OracleResult::Status::cap_exceeded;
      res.states_explored = (long long)states.size();
      return res;
    }

    // per-entity move lists; validity is pruned incrementally while the
    // cartesian product is walked entity by entity
    choice.clear();
    for (int i = 0; i < nt; ++i) {
      std::vector<int> moves;
      const int v = cur.pos[(size_t)i];
      if (cur.settled[(size_t)i]) {
        moves.push_back(v);
      } else {
        const int n = g.neighbors(v, nb);
        nb[n] = v;
        for (int x = 0; x <= n; ++x)
          if (g.is_passable(nb[x])) moves.push_back(nb[x]);
      }
      choice.push_back(std::move(moves));
    }
    for (int j = 0; j < nm; ++j) {
      std::vector<int> moves;
      const int v = cur.pos[(size_t)(nt + j)];
      const int n = g.neighbors(v, nb);
      nb[n] = v;
      for (int x = 0; x <= n; ++x) {
        // a coupled pair keeps the obstacle off static cells
        if (cur.picked[(size_t)j] && !g.is_passable(nb[x])) continue;
        moves.push_back(nb[x]);
      }
      choice.push_back(std::move(moves));
    }

    // positions of obstacles that cannot move this step
    std::vector<int> still_obstacles;
    for (int j = 0; j < nm; ++j)
      if (!cur.picked[(size_t)j])
        still_obstacles.push_back(
            cur.pos[(size_t)(nt + nm + obstacle_of_mover[(size_t)j])]);

    JointState nxt = cur;
    auto emit = [&](long long step) {
      for (int j = 0; j < nm; ++j)
        if (!nxt.picked[(size_t)j] &&
            nxt.pos[(size_t)(nt + j)] ==
                nxt.pos[(size_t)(nt + nm + obstacle_of_mover[(size_t)j])])
          nxt.picked[(size_t)j] = 1;
      std::vector<int> commit;
      for (int i = 0; i < nt; ++i)
        if (!nxt.settled[(size_t)i] &&
            nxt.pos[(size_t)i] == p.task_agents[(size_t)i].goal)
          commit.push_back(i);
      const int subsets = 1 << commit.size();
      const long long nc = ccost + step;
      for (int m = 0; m < subsets; ++m) {
        JointState out = nxt;
        for (size_t b = 0; b < commit.size(); ++b)
          if (m & (1 << b)) out.settled[(size_t)commit[b]] = 1;
        const long long id = intern(out);
        if (best[(size_t)id] < 0 || nc < best[(size_t)id]) {
          best[(size_t)id] = nc;
          parent[(size_t)id] = cid;
          open.push({nc, id});
        }
      }
      // restore the picked flags mutated above
      for (int j = 0; j < nm; ++j) nxt.picked[(size_t)j] = cur.picked[(size_t)j];
    };

    // recursive placement: tasks first, then mover(+obstacle) pairs
    auto place = [&](auto&& self, int e, long long step) -> void {
      if (e == nt + nm) {
        emit(step);
        return;
      }
      const bool is_task = e < nt;
      const int from = cur.pos[(size_t)e];
      for (int w : choice[(size_t)e]) {
        // against already placed agents: distinct vertices, no swaps
        bool ok = true;
        for (int o = 0; o < e && ok; ++o) {
          const int ofrom = cur.pos[(size_t)o];
          const int oto = nxt.pos[(size_t)o];
          if (oto == w) ok = false;
          if (ofrom != from && ofrom == w && oto == from) ok = false;
          // placed carried obstacles coincide with their mover; placed
          // tasks vs this mover's carried obstacle coincide with it too,
          // so no extra footprint checks are needed here
        }
        if (!ok) continue;
        if (is_task) {
          // S3' against stationary movables
          for (int s : still_obstacles)
            if (s == w) ok = false;
          // against already moved pairs' obstacles: covered by the agent
          // checks above (pair footprints coincide)
        } else if (cur.picked[(size_t)(e - nt)]) {
          // carried obstacle: keep off stationary movables (S2') and off
          // placed tasks handled above via agent coincidence
          for (int s : still_obstacles)
            if (s == w) ok = false;
          // swap of the carried obstacle against placed entities equals the
          // mover's own swap check above
        }
        if (!ok) continue;
        nxt.pos[(size_t)e] = w;
        if (!is_task && cur.picked[(size_t)(e - nt)])
          nxt.pos[(size_t)(nt + nm + obstacle_of_mover[(size_t)(e - nt)])] = w;
        long long dstep = 0;
        if (is_task) {
          if (!cur.settled[(size_t)e]) dstep = 1;
        } else {
          if (w != from) {
            if (cur.picked[(size_t)(e - nt)])
              dstep = 1;  // obstacle motion
            else if (cost == CostFn::cost2)
              dstep = 1;  // pre-pickup mover motion
          }
        }
        self(self, e + 1, step + dstep);
      }
      nxt.pos[(size_t)e] = from;
      if (!is_task && cur.picked[(size_t)(e - nt)])
        nxt.pos[(size_t)(nt + nm + obstacle_of_mover[(size_t)(e - nt)])] =
            cur.pos[(size_t)(nt + nm + obstacle_of_mover[(size_t)(e - nt)])];
    };
    place(place, 0, 0);
  }

  res.status = OracleResult::Status::infeasible;
  res.states_explored = (long long)states.size();
  return res;
}

}  // namespace tmapf
