#pragma once

#include <vector>

#include "tmapf/solver.hpp"

namespace tmapf {

// Total order consistent with the priority pairs; entities no pair mentions
// keep their index order at the end. Throws CycleError on a cyclic set.
struct CycleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
std::vector<int> topological_order(
    const std::vector<std::pair<int, int>>& priorities, int n_entities);

// footprint-aware pairwise collision test (vertex sharing per the entity
// collision rules; swaps between any pair of footprints)
bool paths_conflict(const Problem& p, int e1, const EntityPath& a, int e2,
                    const EntityPath& b);

}  // namespace tmapf
