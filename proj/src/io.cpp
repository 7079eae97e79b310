#include "tmapf/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tmapf {

using json = nlohmann::json;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

int parse_header_int(const std::string& line, const std::string& key,
                     int lineno) {
  std::istringstream is(line);
  std::string k;
  int v;
  if (!(is >> k >> v) || k != key)
    throw ParseError("line " + std::to_string(lineno) + ": expected '" + key +
                     " <n>', got '" + line + "'");
  return v;
}

}  // namespace

ParsedMap parse_map(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.size() < 4) throw ParseError("map header truncated");
  if (lines[0] != "type octile")
    throw ParseError("line 1: expected 'type octile'");
  const int height = parse_header_int(lines[1], "height", 2);
  const int width = parse_header_int(lines[2], "width", 3);
  if (lines[3] != "map") throw ParseError("line 4: expected 'map'");
  if (width <= 0 || height <= 0) throw ParseError("non-positive dimensions");
  if ((int)lines.size() < 4 + height)
    throw ParseError("map has fewer rows than the header declares");

  ParsedMap out;
  out.graph.width = width;
  out.graph.height = height;
  out.graph.passable.assign((size_t)(width * height), 1);
  for (int y = 0; y < height; ++y) {
    const std::string& row = lines[(size_t)(4 + y)];
    if ((int)row.size() != width)
      throw ParseError("row " + std::to_string(y) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(width));
    for (int x = 0; x < width; ++x) {
      const char c = row[(size_t)x];
      const int v = out.graph.vertex(x, y);
      switch (c) {
        case '.':
          break;
        case '@':
        case 'T':
          out.graph.passable[(size_t)v] = 0;
          break;
        case 'M':
          out.movable_starts.push_back(v);
          break;
        default:
          throw ParseError("row " + std::to_string(y) + " column " +
                           std::to_string(x) + ": unknown character '" +
                           std::string(1, c) + "'");
      }
    }
  }
  return out;
}

std::string emit_map(const Graph& g, const std::vector<int>& movables) {
  std::ostringstream os;
  os << "type octile\nheight " << g.height << "\nwidth " << g.width
     << "\nmap\n";
  std::vector<char> grid((size_t)g.size());
  for (int v = 0; v < g.size(); ++v)
    grid[(size_t)v] = g.is_passable(v) ? '.' : '@';
  for (int v : movables) grid[(size_t)v] = 'M';
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) os << grid[(size_t)g.vertex(x, y)];
    os << '\n';
  }
  return os.str();
}

Scenario parse_scenario(const std::string& text) {
  auto lines = split_lines(text);
  Scenario s;
  size_t i = 0;
  bool saw_version = false;
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "version") {
      int v = 0;
      is >> v;
      if (v != 1)
        throw ParseError("unsupported scenario version " + std::to_string(v));
      saw_version = true;
    } else if (key == "seed") {
      is >> s.seed;
    } else if (key == "policy") {
      is >> s.policy;
    } else if (key == "T" || key == "M") {
      break;
    } else {
      throw ParseError("line " + std::to_string(i + 1) +
                       ": unknown scenario key '" + key + "'");
    }
  }
  if (!saw_version) throw ParseError("scenario missing 'version' header");
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "T") {
      ScenarioAgent a{};
      if (!(is >> a.start_x >> a.start_y >> a.goal_x >> a.goal_y))
        throw ParseError("line " + std::to_string(i + 1) +
                         ": malformed task line");
      s.tasks.push_back(a);
    } else if (key == "M") {
      ScenarioMover m{};
      if (!(is >> m.start_x >> m.start_y))
        throw ParseError("line " + std::to_string(i + 1) +
                         ": malformed mover line");
      if (is >> m.obs_x) {
        if (!(is >> m.obs_y))
          throw ParseError("line " + std::to_string(i + 1) +
                           ": mover assignment needs two coordinates");
      }
      s.movers.push_back(m);
    } else {
      throw ParseError("line " + std::to_string(i + 1) +
                       ": expected 'T' or 'M' line");
    }
  }
  return s;
}

std::string emit_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "version 1\nseed " << s.seed << "\n";
  if (!s.policy.empty()) os << "policy " << s.policy << "\n";
  for (const auto& a : s.tasks)
    os << "T " << a.start_x << " " << a.start_y << " " << a.goal_x << " "
       << a.goal_y << "\n";
  for (const auto& m : s.movers) {
    os << "M " << m.start_x << " " << m.start_y;
    if (m.obs_x >= 0) os << " " << m.obs_x << " " << m.obs_y;
    os << "\n";
  }
  return os.str();
}

Problem build_problem(const ParsedMap& map, const Scenario& scen) {
  Problem p;
  p.graph = map.graph;
  p.movable_starts = map.movable_starts;
  auto vertex_of = [&](int x, int y, const char* what) {
    if (!p.graph.in_bounds(x, y))
      throw ConfigError(std::string(what) + " (" + std::to_string(x) + "," +
                        std::to_string(y) + ") out of bounds");
    return p.graph.vertex(x, y);
  };
  for (const auto& a : scen.tasks)
    p.task_agents.push_back({vertex_of(a.start_x, a.start_y, "task start"),
                             vertex_of(a.goal_x, a.goal_y, "task goal")});
  bool any_assigned = false, all_assigned = true;
  std::vector<int> assignment;
  for (const auto& m : scen.movers) {
    p.mover_starts.push_back(vertex_of(m.start_x, m.start_y, "mover start"));
    if (m.obs_x >= 0) {
      any_assigned = true;
      const int ov = vertex_of(m.obs_x, m.obs_y, "assigned obstacle");
      auto it = std::find(p.movable_starts.begin(), p.movable_starts.end(), ov);
      if (it == p.movable_starts.end())
        throw ConfigError("assigned obstacle is not a movable cell");
      assignment.push_back((int)(it - p.movable_starts.begin()));
    } else {
      all_assigned = false;
    }
  }
  if (any_assigned && !all_assigned)
    throw ConfigError("either every mover or no mover carries an assignment");
  if (any_assigned) p.assignment = assignment;
  p.validate();
  return p;
}

Problem load_problem(const std::string& map_text,
                     const std::string& scen_text) {
  return build_problem(parse_map(map_text), parse_scenario(scen_text));
}

// ---------------------------------------------------------------------------

WarehouseProfile WarehouseProfile::small() { return {47, 24, 2}; }
WarehouseProfile WarehouseProfile::large() { return {75, 32, 3}; }
WarehouseProfile WarehouseProfile::custom(int width, int height,
                                          int movables_per_row) {
  return {width, height, movables_per_row};
}

std::string generate_warehouse(const WarehouseProfile& profile,
                               uint64_t seed) {
  (void)seed;  // the layout is fully determined by the profile
  const int w = profile.width, h = profile.height;
  if (w < 7 || h < 5) throw ConfigError("warehouse dimensions too small");
  const int shelf_lo = 2, shelf_hi = w - 3;
  if (profile.movables_per_row < 1 ||
      profile.movables_per_row > shelf_hi - shelf_lo - 1)
    throw ConfigError("movables_per_row inconsistent with the width");

  Graph g;
  g.width = w;
  g.height = h;
  g.passable.assign((size_t)(w * h), 1);
  std::vector<int> movables;
  for (int y = 2; y + 2 < h; y += 2) {
    const int cx = (shelf_lo + shelf_hi) / 2;
    const int first = cx - (profile.movables_per_row - 1) / 2;
    for (int x = shelf_lo; x <= shelf_hi; ++x) {
      const int v = g.vertex(x, y);
      if (x >= first && x < first + profile.movables_per_row)
        movables.push_back(v);
      else
        g.passable[(size_t)v] = 0;
    }
  }
  return emit_map(g, movables);
}

namespace {

// goal pool (1): free cells on the border ring, next to the workstations
std::vector<int> workstation_cells(const ParsedMap& map) {
  const Graph& g = map.graph;
  std::vector<char> movable((size_t)g.size(), 0);
  for (int v : map.movable_starts) movable[(size_t)v] = 1;
  std::vector<int> out;
  for (int v = 0; v < g.size(); ++v) {
    const int x = g.x_of(v), y = g.y_of(v);
    if (x != 0 && y != 0 && x != g.width - 1 && y != g.height - 1) continue;
    if (g.is_passable(v) && !movable[(size_t)v]) out.push_back(v);
  }
  return out;
}

int draw_from(std::vector<int>& pool, SplitMix64& rng) {
  if (pool.empty()) throw ConfigError("not enough free cells");
  const size_t i = (size_t)rng.below(pool.size());
  const int v = pool[i];
  pool[i] = pool.back();
  pool.pop_back();
  return v;
}

}  // namespace

std::string generate_scenario(const std::string& map_text, int n_task,
                              int n_movers, uint64_t seed,
                              MoverStartPolicy policy) {
  const ParsedMap map = parse_map(map_text);
  const Graph& g = map.graph;
  if (n_movers != (int)map.movable_starts.size())
    throw ConfigError("mover count must match the map's movable obstacles (" +
                      std::to_string(map.movable_starts.size()) + ")");

  std::vector<char> movable((size_t)g.size(), 0);
  for (int v : map.movable_starts) movable[(size_t)v] = 1;
  std::vector<int> free_cells;
  for (int v = 0; v < g.size(); ++v)
    if (g.is_passable(v) && !movable[(size_t)v]) free_cells.push_back(v);
  if ((int)free_cells.size() < n_task)
    throw ConfigError("not enough free cells for " + std::to_string(n_task) +
                      " task agents");

  SplitMix64 rng(seed);
  Scenario scen;
  scen.seed = seed;
  scen.policy = policy == MoverStartPolicy::under_shelf ? "under-shelf"
                                                        : "uniform-free";

  // draw order: task starts, then per task a coin and its goal, then movers
  std::vector<int> start_pool = free_cells;
  std::vector<int> starts;
  for (int i = 0; i < n_task; ++i) starts.push_back(draw_from(start_pool, rng));

  const std::vector<int> stations = workstation_cells(map);
  std::vector<int> goal_pool = free_cells;
  std::vector<int> station_pool = stations;
  std::vector<int> goals;
  for (int i = 0; i < n_task; ++i) {
    const bool near_station = !station_pool.empty() && (rng.next() & 1) == 0;
    auto& pool = near_station ? station_pool : goal_pool;
    int v = draw_from(pool, rng);
    while (std::find(goals.begin(), goals.end(), v) != goals.end())
      v = draw_from(pool, rng);
    goals.push_back(v);
    // keep the two pools consistent
    auto drop = [&](std::vector<int>& other) {
      auto it = std::find(other.begin(), other.end(), v);
      if (it != other.end()) {
        *it = other.back();
        other.pop_back();
      }
    };
    drop(near_station ? goal_pool : station_pool);
  }

  std::vector<int> mover_starts;
  if (policy == MoverStartPolicy::under_shelf) {
    mover_starts = map.movable_starts;  // mover j under movable j
  } else {
    std::vector<int> pool;
    for (int v : free_cells)
      if (std::find(starts.begin(), starts.end(), v) == starts.end() &&
          std::find(goals.begin(), goals.end(), v) == goals.end())
        pool.push_back(v);
    for (int j = 0; j < n_movers; ++j)
      mover_starts.push_back(draw_from(pool, rng));
  }

  for (int i = 0; i < n_task; ++i)
    scen.tasks.push_back({g.x_of(starts[(size_t)i]), g.y_of(starts[(size_t)i]),
                          g.x_of(goals[(size_t)i]), g.y_of(goals[(size_t)i])});
  for (int j = 0; j < n_movers; ++j) {
    ScenarioMover m{};
    m.start_x = g.x_of(mover_starts[(size_t)j]);
    m.start_y = g.y_of(mover_starts[(size_t)j]);
    if (policy == MoverStartPolicy::under_shelf) {
      m.obs_x = g.x_of(map.movable_starts[(size_t)j]);
      m.obs_y = g.y_of(map.movable_starts[(size_t)j]);
    }
    scen.movers.push_back(m);
  }
  return emit_scenario(scen);
}

// ---------------------------------------------------------------------------

std::vector<CanonicalInstance> canonical_instances() {
  std::vector<CanonicalInstance> out;
  out.push_back({"toy1",
                 "type octile\n"
                 "height 3\n"
                 "width 3\n"
                 "map\n"
                 "...\n"
                 "@M@\n"
                 "...\n",
                 "version 1\n"
                 "seed 0\n"
                 "T 1 0 0 2\n"
                 "M 0 1 1 1\n"});
  out.push_back({"toy2",
                 "type octile\n"
                 "height 1\n"
                 "width 3\n"
                 "map\n"
                 "...\n",
                 "version 1\n"
                 "seed 0\n"
                 "T 0 0 2 0\n"});
  out.push_back({"toy4",
                 "type octile\n"
                 "height 4\n"
                 "width 7\n"
                 "map\n"
                 ".......\n"
                 ".@@M@@.\n"
                 ".......\n"
                 ".......\n",
                 "version 1\n"
                 "seed 0\n"
                 "T 3 0 3 3\n"
                 "M 3 1 3 1\n"});
  return out;
}

// ---------------------------------------------------------------------------

std::string solution_to_json(const Problem& p, const SolveResult& r,
                             const std::string& algorithm,
                             const std::string& cost_function, uint64_t seed) {
  json doc;
  doc["version"] = 1;
  doc["algorithm"] = algorithm;
  doc["cost_function"] = cost_function;
  doc["mode"] = p.is_mapf() ? "mapf" : "tmapf";
  doc["seed"] = seed;
  doc["outcome"] = to_string(r.outcome);
  doc["stats"] = {{"hl_expansions", r.stats.hl_expansions},
                  {"ll_expansions", r.stats.ll_expansions}};
  if (r.outcome == Outcome::solved) {
    doc["cost"] = r.cost;
    json states = json::array();
    auto cells = [&](const std::vector<int>& vs) {
      json arr = json::array();
      for (int v : vs)
        arr.push_back({p.graph.x_of(v), p.graph.y_of(v)});
      return arr;
    };
    for (const auto& s : r.solution->states)
      states.push_back({{"tasks", cells(s.tasks)},
                        {"movers", cells(s.movers)},
                        {"obstacles", cells(s.obstacles)}});
    doc["states"] = std::move(states);
  }
  return doc.dump(2) + "\n";
}

Solution solution_from_json(const Graph& g, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution is not valid JSON: ") + e.what());
  }
  if (!doc.contains("states") || !doc["states"].is_array())
    throw ParseError("solution document has no states array");
  Solution sol;
  int t = 0;
  for (const auto& js : doc["states"]) {
    State s;
    s.time = t++;
    auto read = [&](const char* key, std::vector<int>& out) {
      if (!js.contains(key))
        throw ParseError("state misses '" + std::string(key) + "'");
      for (const auto& cell : js[key]) {
        if (!cell.is_array() || cell.size() != 2)
          throw ParseError("cells must be [x,y] pairs");
        const int x = cell[0].get<int>(), y = cell[1].get<int>();
        if (!g.in_bounds(x, y))
          throw ParseError("cell (" + std::to_string(x) + "," +
                           std::to_string(y) + ") out of bounds");
        out.push_back(g.vertex(x, y));
      }
    };
    read("tasks", s.tasks);
    read("movers", s.movers);
    read("obstacles", s.obstacles);
    sol.states.push_back(std::move(s));
  }
  return sol;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

}  // namespace tmapf
