#pragma once

#include <cstdint>
#include <vector>

#include "dynmatch/common.hpp"

namespace dynmatch {

struct WeightedEdge {
  NodeId u = 0;
  NodeId v = 0;
  std::int64_t w = 0;
};

// Exact maximum-weight matching by dynamic programming over vertex subsets.
// Only valid for n <= 22; throws BadParameter beyond that.
std::int64_t max_weight_matching_small(NodeId n, const std::vector<WeightedEdge>& edges);

// Deterministic greedy maximal matching in the given edge order.
std::vector<std::pair<NodeId, NodeId>> greedy_maximal_matching(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges);

}  // namespace dynmatch
