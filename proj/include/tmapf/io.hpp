#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmapf/model.hpp"
#include "tmapf/solver.hpp"

namespace tmapf {

// SplitMix64; scenario files generated from the same seed are portable
// across implementations
struct SplitMix64 {
  uint64_t x;
  explicit SplitMix64(uint64_t seed) : x(seed) {}
  uint64_t next() {
    x += 0x9E3779B97F4A7C15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return next() % n; }
};

// MovingAI grid text with one extension: 'M' marks a movable obstacle whose
// cell stays passable (movers may slide underneath it).
struct ParsedMap {
  Graph graph;
  std::vector<int> movable_starts;
};

ParsedMap parse_map(const std::string& text);
std::string emit_map(const Graph& g, const std::vector<int>& movables);

struct ScenarioAgent {
  int start_x, start_y, goal_x, goal_y;
};
struct ScenarioMover {
  int start_x, start_y;
  int obs_x = -1, obs_y = -1;  // optional explicit assignment
};
struct Scenario {
  uint64_t seed = 0;
  std::string policy;  // informational
  std::vector<ScenarioAgent> tasks;
  std::vector<ScenarioMover> movers;
};

Scenario parse_scenario(const std::string& text);
std::string emit_scenario(const Scenario& s);

Problem build_problem(const ParsedMap& map, const Scenario& scen);
Problem load_problem(const std::string& map_text,
                     const std::string& scen_text);

// Warehouse layouts: long shelf rows split by one-cell aisles, workstations
// along the border, movable obstacles in the middle of every shelf row.
struct WarehouseProfile {
  int width = 0;
  int height = 0;
  int movables_per_row = 0;
  static WarehouseProfile small();   // 47x24, 20 movables
  static WarehouseProfile large();   // 75x32, 42 movables
  static WarehouseProfile custom(int width, int height, int movables_per_row);
};

std::string generate_warehouse(const WarehouseProfile& profile, uint64_t seed);

enum class MoverStartPolicy { under_shelf, uniform_free };

std::string generate_scenario(const std::string& map_text, int n_task,
                              int n_movers, uint64_t seed,
                              MoverStartPolicy policy);

struct CanonicalInstance {
  std::string name;
  std::string map_text;
  std::string scen_text;
};
std::vector<CanonicalInstance> canonical_instances();

// solution file schema (JSON, sorted keys, "\n"-terminated)
std::string solution_to_json(const Problem& p, const SolveResult& r,
                             const std::string& algorithm,
                             const std::string& cost_function, uint64_t seed);
Solution solution_from_json(const Graph& g, const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tmapf
