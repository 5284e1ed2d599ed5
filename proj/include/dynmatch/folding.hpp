#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/oracle.hpp"

namespace dynmatch {

// Unweighted expansion of an integer-weighted graph. A node u with maximum
// incident weight L gets copies u^1..u^L (dense ids base[u] .. base[u]+L-1);
// an edge (u, v) of weight w becomes the w disjoint copies (u^i, v^{w-i+1})
// for i in 1..w, so a maximum matching of the expansion has the weight of a
// maximum-weight matching of the source on bipartite instances.
struct FoldedGraph {
  NodeId source_nodes = 0;
  std::vector<WeightedEdge> source;
  NodeId nodes = 0;                              // expanded node count
  std::vector<std::pair<NodeId, NodeId>> edges;  // expanded edges
  std::vector<NodeId> base;                      // first copy id per source node
  std::vector<std::int64_t> copies;              // copy count per source node
  std::unordered_map<std::uint64_t, std::uint32_t> origin;  // edge -> source idx

  // Dense id of copy u^i (1-based i).
  NodeId id(NodeId u, std::int64_t i) const {
    return base[u] + static_cast<NodeId>(i - 1);
  }
};

// Builds the expansion. Rejects out-of-range endpoints, self-loops,
// duplicate pairs, and weights < 1.
FoldedGraph unfold_graph(NodeId n, const std::vector<WeightedEdge>& edges);

// Maps a subgraph of the expansion back to the weighted source edges with at
// least one copy present. Rejects edges outside the expansion.
std::vector<WeightedEdge> refold_subgraph(
    const FoldedGraph& f, const std::vector<std::pair<NodeId, NodeId>>& sub);

// Greedy static degree-capped subgraph: scan edges in order and keep an edge
// iff both endpoints still have fewer than d kept edges. Every skipped edge
// then has an endpoint of kept-degree d.
std::vector<std::pair<NodeId, NodeId>> static_kernel(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges,
    std::uint32_t d);

// Degree cap ceil(144 * eps^-2 * ln(2 * max_weight / eps)) used when the
// static subgraph stands in for the full expansion of a weighted graph.
std::uint32_t folding_kernel_degree(double eps, std::int64_t max_weight);

// Parses lines of the form "u v w" (integer w >= 1); blank lines are
// ignored. Malformed lines are an error.
std::vector<WeightedEdge> read_weighted_edges(std::istream& in);

}  // namespace dynmatch
