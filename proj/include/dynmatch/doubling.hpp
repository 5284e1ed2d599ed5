#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynmatch/bipartite_matcher.hpp"
#include "dynmatch/common.hpp"

namespace dynmatch {

struct DoublingParams {
  double inner_eps = 0.1;  // accuracy of the inner bipartite matcher
  void validate() const;
};

// General-graph matcher built on a bipartite one. Each node v gets two
// copies: v (low side) and v + n (high side); an edge (u, v) becomes the two
// mirrored bipartite edges (u, v+n) and (v, u+n), so one update here feeds
// two updates to the inner matcher.
//
// From the inner matcher's output M' we derive half-integral values
// x(u,v) = (count of the two mirrored edges present in M') / 2. Their
// support has maximum degree 2 — each copy of a node is matched at most
// once — so it splits into disjoint paths and cycles, and this class keeps a
// maximum matching of the support: components touched by a support change are
// rematched from scratch (paths alternately from the smaller endpoint; odd
// cycles leave the edge at their smallest node unmatched), which keeps the
// output deterministic. A maximum matching of the support carries at least
// 2/3 of the total x-mass, hence at least 2/(3a) of the optimum when the
// inner matcher is a-approximate.
class DoublingMatcher {
 public:
  DoublingMatcher(NodeId n, DoublingParams params);

  const std::vector<EdgeChange>& insert(NodeId u, NodeId v);
  const std::vector<EdgeChange>& remove(NodeId u, NodeId v);

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(NodeId u, NodeId v) const {
    return edges_.count(edge_key(u, v)) != 0;
  }

  std::size_t size() const { return size_; }
  NodeId mate(NodeId v) const;
  Matching matching() const;

  // Half-units: 0, 1, or 2 (x = value / 2).
  int x_half_units(NodeId u, NodeId v) const;
  // Sorted support edges with their half-unit values.
  std::vector<std::pair<std::pair<NodeId, NodeId>, int>> support() const;

  const BipartiteMatcher& inner() const { return inner_; }
  std::uint64_t ops() const { return ops_.total + inner_.ops(); }
  const DoublingParams& params() const { return params_; }

 private:
  void check_node(NodeId v) const;
  void absorb_inner_changes(const std::vector<EdgeChange>& cs,
                            std::vector<NodeId>& touched);
  void add_support(NodeId u, NodeId v);
  void drop_support(NodeId u, NodeId v);
  void rematch_components(std::vector<NodeId>& touched);
  void record(EventKind kind, NodeId u, NodeId v);

  NodeId n_;
  DoublingParams params_;
  BipartiteMatcher inner_;  // on 2n nodes
  std::unordered_set<std::uint64_t> edges_;
  std::unordered_map<std::uint64_t, std::uint8_t> x_;  // half-units, key > 0 only
  std::vector<std::array<NodeId, 2>> adj_;  // support adjacency (degree <= 2)
  std::vector<NodeId> mate_;
  std::size_t size_ = 0;
  std::vector<EdgeChange> changes_;
  std::uint64_t seq_ = 0;
  OpCounter ops_;
};

}  // namespace dynmatch
