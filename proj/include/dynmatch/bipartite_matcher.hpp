#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/recourse.hpp"

namespace dynmatch {

struct BipartiteParams {
  double eps = 0.1;  // must lie in (0, 1/6): shared by matcher and wrapper
  void validate() const;
};

// Dynamic matcher for bipartite graphs given as oriented (low, high) edges,
// with recourse-limited output.
//
// Inner layer: updates are grouped into phases of floor((eps/9) * size) + 1
// updates. At each phase opening the matcher recomputes, from the current
// edge set, a maximal matching free of augmenting paths of length <= 3
// (greedy pass + alternating repair sweeps to a fixpoint) — a 3/2-approximate
// matching. Within a phase the optimum drifts by at most one per update
// (true for edge and star updates alike), so the inner matching stays
// (3/2 + eps)-approximate; deleted matched edges are dropped immediately.
// Rebuild cost is charged in full at the phase-opening update and shows up as
// a spike in the operation counter; budgets here are measured, not bounded by
// a closed form.
//
// Output layer: a RecourseLimiter at the same eps re-emits the inner matching
// with at most ceil(16/eps) changes per logical update, costing a further
// (1 + 6*eps) factor.
//
// Side discipline: a node acquires the low or high side with its first live
// edge and keeps it until its last edge disappears; an insertion that assigns
// a node both sides is rejected. A star update is one logical update: all its
// edges are applied, then one phase step runs.
class BipartiteMatcher {
 public:
  BipartiteMatcher(NodeId n, BipartiteParams params);

  const std::vector<EdgeChange>& insert(NodeId lo, NodeId hi);
  const std::vector<EdgeChange>& remove(NodeId u, NodeId v);
  // Applies every star edge (center with each leaf), then one phase step.
  // For insertions, leaves sit on the side opposite `center_high`; deletions
  // must name existing edges. Validation happens before any mutation.
  const std::vector<EdgeChange>& apply_star(const StarUpdate& star,
                                            bool center_high);

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(NodeId u, NodeId v) const;

  // Recourse-limited output.
  std::size_t size() const { return limiter_.size(); }
  NodeId mate(NodeId u) const { return limiter_.mate(u); }
  Matching matching() const { return limiter_.matching(); }
  std::size_t max_changes_per_update() const {
    return limiter_.max_changes_per_update();
  }

  // Inner (pre-limiter) matching.
  std::size_t inner_size() const { return inner_size_; }
  Matching inner_matching() const;

  std::size_t phase_length() const { return phase_len_; }
  std::size_t phase_position() const { return phase_pos_; }
  std::uint64_t ops() const { return ops_.total + limiter_.ops(); }
  const BipartiteParams& params() const { return params_; }

  // 0 = unassigned, 1 = low, 2 = high; exposed for tests and callers that
  // need to route star updates consistently.
  int side_of(NodeId v) const;

 private:
  void check_node(NodeId v) const;
  void insert_edge_raw(NodeId lo, NodeId hi);
  void remove_edge_raw(NodeId u, NodeId v);
  void drop_inner(NodeId u, NodeId v);
  void phase_step();
  void rebuild();
  const std::vector<EdgeChange>& finish_update();

  NodeId n_;
  BipartiteParams params_;

  // Oriented edge store: canonical key -> (low, high).
  std::unordered_map<std::uint64_t, std::pair<NodeId, NodeId>> edges_;
  std::vector<std::uint32_t> as_low_, as_high_;  // live-edge side counts

  // Both directions are stored; size counts each matched pair once.
  std::unordered_map<NodeId, NodeId> inner_mate_;
  std::size_t inner_size_ = 0;
  std::size_t phase_len_ = 0;
  std::size_t phase_pos_ = 0;

  RecourseLimiter limiter_;
  Matching deleted_batch_, inserted_batch_;
  OpCounter ops_;
};

}  // namespace dynmatch
