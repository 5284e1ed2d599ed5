#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dynmatch/common.hpp"

namespace dynmatch {

// Exact maximum-cardinality matching on general graphs (blossom contraction).
//
// Two modes of use:
//  - Dynamic mode: insert_edge/delete_edge keep the matching maximum after
//    every update by warm-started augmenting searches (a single update changes
//    the optimum by at most one, so one search round restores optimality).
//  - Bulk mode: reset(), then seed_pair()/load_edge() to install a starting
//    matching and adjacency without searching, then augment_from() once per
//    free node. A failed search from a node stays fruitless under later
//    augmentations elsewhere, so one sweep reaches the maximum. Edges added
//    with load_edge are not registered for deletion; a bulk-loaded engine
//    must be reset() before switching back to dynamic mode.
//
// Per-search scratch state is version-stamped, so a search costs time
// proportional to the subgraph it actually explores, not to n.
class MaxMatching {
 public:
  explicit MaxMatching(NodeId n);

  void insert_edge(NodeId u, NodeId v);
  void delete_edge(NodeId u, NodeId v);
  void apply(const UpdateEvent& ev);

  // Discards the matching and recomputes from the current adjacency.
  void resolve();

  // Bulk mode.
  void reset();
  void seed_pair(NodeId u, NodeId v);        // pre-match two free nodes
  void load_edge(NodeId u, NodeId v);        // adjacency only; greedy-match if both free
  bool augment_from(NodeId root);            // one augmenting search; true if |M| grew

  std::size_t size() const { return size_; }
  NodeId mate(NodeId v) const { return mate_[v]; }
  bool covered(NodeId v) const { return mate_[v] != kNoNode; }
  std::vector<std::pair<NodeId, NodeId>> matched_edges() const;
  NodeId node_count() const { return n_; }
  const std::vector<std::vector<NodeId>>& adjacency() const { return adj_; }

  // Keeps |M| maximum while maximizing how many flagged nodes are covered,
  // via alternating-path exchanges that trade coverage of an unflagged node
  // for a flagged one. Returns the number of flagged nodes covered afterwards.
  std::size_t maximize_coverage(const std::vector<std::uint8_t>& flagged);

  std::uint64_t ops() const { return ops_; }

 private:
  // Alternating-tree search from `root`; augments and returns true if a free
  // node is reached. `forbid` bars one node from the tree entirely (used by
  // coverage exchanges to pin which endpoint loses its match).
  bool find_path(NodeId root, NodeId forbid = kNoNode);
  NodeId lca(NodeId a, NodeId b);
  void mark_path(NodeId v, NodeId b, NodeId child);
  void full_pass();
  void touch(NodeId v);

  // stamped accessors for per-search scratch
  NodeId parent_of(NodeId v) const { return p_stamp_[v] == search_tm_ ? p_[v] : kNoNode; }
  void set_parent(NodeId v, NodeId x) { p_[v] = x; p_stamp_[v] = search_tm_; }
  NodeId base_of(NodeId v) const { return base_stamp_[v] == search_tm_ ? base_[v] : v; }
  void set_base(NodeId v, NodeId b) { base_[v] = b; base_stamp_[v] = search_tm_; }
  bool even_now(NodeId v) const { return even_stamp_[v] == search_tm_; }
  void set_even(NodeId v) { even_stamp_[v] = search_tm_; }
  bool in_blossom_now(NodeId v) const { return blossom_stamp_[v] == blossom_tm_; }
  void set_in_blossom(NodeId v) { blossom_stamp_[v] = blossom_tm_; }

  NodeId n_;
  std::vector<std::vector<NodeId>> adj_;
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> pos_;
  std::vector<NodeId> mate_;
  std::size_t size_ = 0;
  // search scratch (all version-stamped)
  std::vector<NodeId> p_, base_, q_;
  std::vector<std::uint64_t> p_stamp_, base_stamp_, even_stamp_, blossom_stamp_, lca_mark_;
  std::uint64_t search_tm_ = 0, blossom_tm_ = 0, lca_tm_ = 0;
  // bulk-mode bookkeeping: nodes whose adjacency/mate may be dirty
  std::vector<NodeId> touched_;
  std::vector<std::uint64_t> touch_stamp_;
  std::uint64_t touch_tm_ = 1;
  std::uint64_t ops_ = 0;

  friend class StabilityMatcher;
};

// Fresh exact maximum matching size for an explicit edge list.
std::size_t max_matching_size(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges);

// Fresh exact maximum matching (the edge set itself).
std::vector<std::pair<NodeId, NodeId>> max_matching(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges);

// Reference result by exhaustive branch on the highest-degree node; intended
// for cross-checking the blossom engine on small sparse graphs.
std::size_t exhaustive_matching_size(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges);

}  // namespace dynmatch
