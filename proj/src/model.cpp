#include "tmapf/model.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace tmapf {

namespace {

std::string cell_str(const Graph& g, int v) {
  std::ostringstream os;
  os << "(" << g.x_of(v) << "," << g.y_of(v) << ")";
  return os.str();
}

void require_dims(const Problem& p, const State& s) {
  if ((int)s.tasks.size() != p.num_tasks() ||
      (int)s.movers.size() != p.num_movers() ||
      (int)s.obstacles.size() != p.num_movables()) {
    throw std::invalid_argument("state dimensions do not match problem");
  }
}

}  // namespace

int Graph::neighbors(int v, int out[4]) const {
  const int x = x_of(v), y = y_of(v);
  int n = 0;
  if (x > 0) out[n++] = v - 1;
  if (x + 1 < width) out[n++] = v + 1;
  if (y > 0) out[n++] = v - width;
  if (y + 1 < height) out[n++] = v + width;
  return n;
}

bool Graph::adjacent(int u, int v) const {
  if (u == v) return true;  // wait edge
  const int ux = x_of(u), uy = y_of(u), vx = x_of(v), vy = y_of(v);
  return std::abs(ux - vx) + std::abs(uy - vy) == 1;
}

std::vector<int> Problem::static_obstacles() const {
  std::vector<int> out;
  for (int v = 0; v < graph.size(); ++v)
    if (!graph.is_passable(v)) out.push_back(v);
  return out;
}

Problem Problem::to_static() const {
  Problem q;
  q.graph = graph;
  for (int v : movable_starts) q.graph.passable[(size_t)v] = 0;
  q.task_agents = task_agents;
  return q;
}

void Problem::validate() const {
  if (graph.width <= 0 || graph.height <= 0 ||
      (int)graph.passable.size() != graph.size())
    throw ConfigError("graph dimensions inconsistent");
  if (num_movers() != num_movables())
    throw ConfigError("mover count must equal movable-obstacle count");

  auto check_bounds = [&](int v, const char* what) {
    if (v < 0 || v >= graph.size())
      throw ConfigError(std::string(what) + " out of bounds");
  };
  std::unordered_set<int> seen;
  for (const auto& a : task_agents) {
    check_bounds(a.start, "task start");
    check_bounds(a.goal, "task goal");
    if (!seen.insert(a.start).second)
      throw ConfigError("duplicate task start " + cell_str(graph, a.start));
  }
  seen.clear();
  for (int v : mover_starts) {
    check_bounds(v, "mover start");
    if (!seen.insert(v).second)
      throw ConfigError("duplicate mover start " + cell_str(graph, v));
  }
  seen.clear();
  for (int v : movable_starts) {
    check_bounds(v, "movable start");
    if (!graph.is_passable(v))
      throw ConfigError("movable obstacle on static cell " +
                        cell_str(graph, v));
    if (!seen.insert(v).second)
      throw ConfigError("duplicate movable start " + cell_str(graph, v));
  }
  std::unordered_set<int> blocked(movable_starts.begin(), movable_starts.end());
  for (const auto& a : task_agents) {
    if (!graph.is_passable(a.start) || blocked.count(a.start))
      throw ConfigError("task start on obstacle " + cell_str(graph, a.start));
    if (!graph.is_passable(a.goal) || blocked.count(a.goal))
      throw ConfigError("task goal on obstacle " + cell_str(graph, a.goal));
  }
  // task and mover starts may not coincide (states must start valid)
  std::unordered_set<int> tstarts;
  for (const auto& a : task_agents) tstarts.insert(a.start);
  for (int v : mover_starts)
    if (tstarts.count(v))
      throw ConfigError("mover start collides with task start " +
                        cell_str(graph, v));
  if (assignment) {
    if ((int)assignment->size() != num_movers())
      throw ConfigError("assignment size mismatch");
    std::vector<char> used(num_movables(), 0);
    for (int m : *assignment) {
      if (m < 0 || m >= num_movables() || used[(size_t)m])
        throw ConfigError("assignment is not a permutation");
      used[(size_t)m] = 1;
    }
  }
}

std::vector<int> Solution::task_path(int i) const {
  std::vector<int> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.tasks[(size_t)i]);
  return out;
}

std::vector<int> Solution::mover_path(int j) const {
  std::vector<int> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.movers[(size_t)j]);
  return out;
}

std::vector<int> Solution::obstacle_path(int k) const {
  std::vector<int> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.obstacles[(size_t)k]);
  return out;
}

ValidityReport validate_state(const Problem& p, const State& s, Mode mode) {
  require_dims(p, s);
  ValidityReport r;
  auto flag = [&](const char* rule, const std::string& detail) {
    r.ok = false;
    r.violations.push_back({rule, s.time, detail});
  };

  // S1: no two agents (of any kind) share a vertex
  const int nt = p.num_tasks(), nm = p.num_movers();
  std::vector<int> agents(s.tasks);
  agents.insert(agents.end(), s.movers.begin(), s.movers.end());
  for (int i = 0; i < (int)agents.size(); ++i)
    for (int j = i + 1; j < (int)agents.size(); ++j)
      if (agents[(size_t)i] == agents[(size_t)j])
        flag("S1", "agents " + std::to_string(i) + " and " + std::to_string(j) +
                       " share " + cell_str(p.graph, agents[(size_t)i]));
  (void)nm;

  if (mode == Mode::mapf) {
    // S2: agents do not collide with obstacles (static cells)
    for (int i = 0; i < nt; ++i)
      if (!p.graph.is_passable(s.tasks[(size_t)i]))
        flag("S2", "agent " + std::to_string(i) + " on obstacle " +
                       cell_str(p.graph, s.tasks[(size_t)i]));
    return r;
  }

  // S2: no two obstacles share a vertex; movables stay off static cells
  for (int i = 0; i < (int)s.obstacles.size(); ++i) {
    if (!p.graph.is_passable(s.obstacles[(size_t)i]))
      flag("S2", "movable " + std::to_string(i) + " on static cell " +
                     cell_str(p.graph, s.obstacles[(size_t)i]));
    for (int j = i + 1; j < (int)s.obstacles.size(); ++j)
      if (s.obstacles[(size_t)i] == s.obstacles[(size_t)j])
        flag("S2", "movables " + std::to_string(i) + " and " +
                       std::to_string(j) + " share " +
                       cell_str(p.graph, s.obstacles[(size_t)i]));
  }

  // S3': task agents share no vertex with any obstacle
  for (int i = 0; i < nt; ++i) {
    const int v = s.tasks[(size_t)i];
    if (!p.graph.is_passable(v))
      flag("S3'", "task " + std::to_string(i) + " on static obstacle " +
                      cell_str(p.graph, v));
    for (int k = 0; k < (int)s.obstacles.size(); ++k)
      if (s.obstacles[(size_t)k] == v)
        flag("S3'", "task " + std::to_string(i) + " on movable " +
                        std::to_string(k) + " at " + cell_str(p.graph, v));
  }
  return r;
}

ValidityReport validate_transition(const Problem& p, const State& a,
                                   const State& b, Mode mode) {
  require_dims(p, a);
  require_dims(p, b);
  ValidityReport r;
  auto flag = [&](const char* rule, const std::string& detail) {
    r.ok = false;
    r.violations.push_back({rule, b.time, detail});
  };

  // combined entity vector: tasks, movers, movable obstacles
  std::vector<int> ca(a.tasks), cb(b.tasks);
  if (mode == Mode::tmapf) {
    ca.insert(ca.end(), a.movers.begin(), a.movers.end());
    ca.insert(ca.end(), a.obstacles.begin(), a.obstacles.end());
    cb.insert(cb.end(), b.movers.begin(), b.movers.end());
    cb.insert(cb.end(), b.obstacles.begin(), b.obstacles.end());
  }

  // T1': everything moves along graph edges (self edge = wait)
  for (int i = 0; i < (int)ca.size(); ++i)
    if (!p.graph.adjacent(ca[(size_t)i], cb[(size_t)i]))
      flag("T1'", "entity " + std::to_string(i) + " jumps " +
                      cell_str(p.graph, ca[(size_t)i]) + "->" +
                      cell_str(p.graph, cb[(size_t)i]));

  // T2': no two entities swap across the same edge
  for (int i = 0; i < (int)ca.size(); ++i)
    for (int j = i + 1; j < (int)ca.size(); ++j)
      if (ca[(size_t)i] != ca[(size_t)j] && ca[(size_t)i] == cb[(size_t)j] &&
          ca[(size_t)j] == cb[(size_t)i])
        flag("T2'", "entities " + std::to_string(i) + " and " +
                        std::to_string(j) + " swap over " +
                        cell_str(p.graph, ca[(size_t)i]) + "-" +
                        cell_str(p.graph, ca[(size_t)j]));

  // T3': a movable obstacle moves only with its assigned mover alongside
  if (mode == Mode::tmapf) {
    for (int k = 0; k < (int)a.obstacles.size(); ++k) {
      if (a.obstacles[(size_t)k] == b.obstacles[(size_t)k]) continue;
      int mover = -1;
      if (p.assignment) {
        for (int j = 0; j < p.num_movers(); ++j)
          if ((*p.assignment)[(size_t)j] == k) mover = j;
      }
      const bool carried =
          mover >= 0 && a.movers[(size_t)mover] == a.obstacles[(size_t)k] &&
          b.movers[(size_t)mover] == b.obstacles[(size_t)k];
      if (!carried)
        flag("T3'", "movable " + std::to_string(k) +
                        " moves without its assigned mover");
    }
  }
  return r;
}

std::optional<int> cost_task_agent(const Problem& p, const Solution& sol,
                                   int agent) {
  if (sol.empty()) throw std::invalid_argument("empty solution");
  const int goal = p.task_agents[(size_t)agent].goal;
  const int k = sol.length();
  if (sol.states[(size_t)(k - 1)].tasks[(size_t)agent] != goal)
    return std::nullopt;
  int settle = k - 1;
  while (settle > 0 &&
         sol.states[(size_t)(settle - 1)].tasks[(size_t)agent] == goal)
    --settle;
  return settle;
}

int pickup_time(const Problem& p, const Solution& sol, int mover) {
  (void)p;
  const std::vector<int>* obst = nullptr;
  std::vector<int> obst_path;
  if (p.assignment) {
    obst_path = sol.obstacle_path((*p.assignment)[(size_t)mover]);
    obst = &obst_path;
  } else {
    throw ConfigError("pickup_time requires an assignment");
  }
  for (int t = 0; t < sol.length(); ++t)
    if (sol.states[(size_t)t].movers[(size_t)mover] == (*obst)[(size_t)t])
      return t;
  return kInfTime;
}

long long sum_of_costs(const Problem& p, const Solution& sol) {
  long long total = 0;
  for (int i = 0; i < p.num_tasks(); ++i) {
    auto c = cost_task_agent(p, sol, i);
    if (!c) throw std::invalid_argument("task agent never settles at goal");
    total += *c;
  }
  return total;
}

long long cost1(const Problem& p, const Solution& sol) {
  long long total = sum_of_costs(p, sol);
  for (int k = 0; k < p.num_movables(); ++k) {
    auto path = sol.obstacle_path(k);
    for (size_t t = 1; t < path.size(); ++t)
      if (path[t] != path[t - 1]) ++total;
  }
  return total;
}

long long cost2(const Problem& p, const Solution& sol) {
  long long total = cost1(p, sol);
  for (int j = 0; j < p.num_movers(); ++j) {
    const int pick = pickup_time(p, sol, j);
    auto path = sol.mover_path(j);
    // moves departing before the pickup timestep
    for (int t = 1; t < (int)path.size() && t <= pick; ++t)
      if (path[(size_t)t] != path[(size_t)(t - 1)]) ++total;
  }
  return total;
}

}  // namespace tmapf
