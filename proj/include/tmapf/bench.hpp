#pragma once

#include <string>
#include <vector>

#include "tmapf/io.hpp"
#include "tmapf/solver.hpp"

namespace tmapf {

// sum of single-agent shortest paths with every obstacle in place and all
// interactions ignored; second member is false when some agent is cut off
std::pair<long long, bool> baseline_cost(const Problem& p);

struct BenchConfig {
  std::string map_text;
  std::vector<std::pair<std::string, std::string>> scenarios;  // name, text
  std::vector<Algo> algos;
  CostFn cost = CostFn::cost1;
  double timeout_secs = 300.0;
  uint64_t seed = 0;
  bool validate = false;
  int jobs = 1;
};

struct RunRecord {
  std::string scenario;
  Algo algo = Algo::cbs;
  CostFn cost_fn = CostFn::cost1;
  Outcome outcome = Outcome::infeasible;
  long long cost = -1;
  long long baseline = -1;  // -1: some agent has no path at all
  double subopt = -1.0;     // cost / baseline; unconstrained, may dip below 1
  long long hl_expansions = 0;
  long long ll_expansions = 0;
  double wall_ms = 0;  // console diagnostics only, never serialized
  uint64_t seed = 0;
  bool validated_ok = true;
};

struct BenchReport {
  std::vector<RunRecord> records;
  std::string csv;           // byte-stable across reruns
  std::string summary_json;  // byte-stable across reruns
  int validation_failures = 0;
  bool all_timed_out = false;
};

BenchReport run_bench(const BenchConfig& cfg);

// report regeneration is pure over the records
std::string records_to_csv(const std::vector<RunRecord>& records);
std::string summarize(const std::vector<RunRecord>& records,
                      const std::vector<Algo>& algos);

}  // namespace tmapf
