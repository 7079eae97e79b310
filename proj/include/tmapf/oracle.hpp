#pragma once

#include <optional>
#include <vector>

#include "tmapf/model.hpp"
#include "tmapf/lowlevel.hpp"

namespace tmapf {

struct Certificate {
  bool ok = true;
  std::vector<Violation> violations;
};

// Re-derives every state, transition and boundary rule over the raw state
// sequence. Throws ParseError on a malformed solution (dimension mismatch,
// empty sequence).
Certificate certify(const Problem& p, const Solution& sol, Mode mode);

struct OracleResult {
  enum class Status { optimal, infeasible, cap_exceeded };
  Status status = Status::infeasible;
  long long cost = -1;
  std::optional<Solution> witness;
  long long states_explored = 0;
};

// Uniform-cost search over joint configurations. Movers follow the same
// discipline the solvers plan for: walk to the assigned obstacle, couple on
// first contact, and stay coupled (parking back at the obstacle's start).
OracleResult brute_force_optimal(const Problem& p, Mode mode, CostFn cost,
                                 long long state_cap = 1000000);

}  // namespace tmapf
