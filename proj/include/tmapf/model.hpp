#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmapf {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kInfTime = 1 << 28;

// 4-connected grid. Every cell is a vertex and waiting uses the implicit
// self edge. Static-obstacle cells keep their vertex with passable=false,
// since mover agents are allowed to travel underneath them.
struct Graph {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> passable;

  int size() const { return width * height; }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  int vertex(int x, int y) const { return y * width + x; }
  int x_of(int v) const { return v % width; }
  int y_of(int v) const { return v / width; }
  bool is_passable(int v) const { return passable[(size_t)v] != 0; }

  // orthogonal neighbors; the self edge is handled by callers
  int neighbors(int v, int out[4]) const;
  // edge test including the self edge (wait)
  bool adjacent(int u, int v) const;
};

struct AgentTask {
  int start = -1;
  int goal = -1;
};

enum class Mode { mapf, tmapf };

struct Problem {
  Graph graph;
  std::vector<AgentTask> task_agents;
  std::vector<int> mover_starts;
  std::vector<int> movable_starts;  // start doubles as the goal
  std::optional<std::vector<int>> assignment;  // mover index -> movable index

  int num_tasks() const { return (int)task_agents.size(); }
  int num_movers() const { return (int)mover_starts.size(); }
  int num_movables() const { return (int)movable_starts.size(); }
  int num_entities() const { return num_tasks() + num_movers(); }
  bool is_static_obstacle(int v) const { return !graph.is_passable(v); }
  bool is_mapf() const { return num_movers() == 0 && num_movables() == 0; }

  std::vector<int> static_obstacles() const;

  // movables frozen into static cells, movers dropped
  Problem to_static() const;

  // throws ConfigError when the instance breaks a construction invariant
  void validate() const;
};

struct State {
  std::vector<int> tasks;
  std::vector<int> movers;
  std::vector<int> obstacles;
  int time = 0;
};

struct Solution {
  std::vector<State> states;

  int length() const { return (int)states.size(); }
  bool empty() const { return states.empty(); }
  std::vector<int> task_path(int i) const;
  std::vector<int> mover_path(int j) const;
  std::vector<int> obstacle_path(int k) const;
};

struct Violation {
  std::string rule;  // S1, S2, S3', T1', T2', T3', start, goal, obstacle-restore
  int time = 0;
  std::string detail;
};

struct ValidityReport {
  bool ok = true;
  std::vector<Violation> violations;
};

ValidityReport validate_state(const Problem& p, const State& s, Mode mode);
ValidityReport validate_transition(const Problem& p, const State& a,
                                   const State& b, Mode mode);

// earliest timestep after which the agent stays at its goal; nullopt if it
// never settles there
std::optional<int> cost_task_agent(const Problem& p, const Solution& sol,
                                   int agent);

// first timestep the mover shares a vertex with its assigned movable;
// kInfTime when that never happens
int pickup_time(const Problem& p, const Solution& sol, int mover);

long long sum_of_costs(const Problem& p, const Solution& sol);
long long cost1(const Problem& p, const Solution& sol);
long long cost2(const Problem& p, const Solution& sol);

}  // namespace tmapf
