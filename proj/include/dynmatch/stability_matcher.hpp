#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "dynmatch/blossom.hpp"
#include "dynmatch/common.hpp"
#include "dynmatch/graph.hpp"

namespace dynmatch {

struct StabilityParams {
  // Accuracy target: the maintained matching M satisfies
  // |M| * (1 + eps) >= mu(G) after every update. Must lie in (0, 1/3].
  double eps = 1.0 / 3.0;
  // Hard cap on the degree of the maintained graph. Inserting an edge that
  // would push an endpoint past this bound is an error.
  std::uint32_t max_degree = 1;

  void validate() const;
};

// Near-maximum matching under edge updates in a bounded-degree graph.
//
// Time is split into phases. A phase starting with output size z lasts
// floor((eps/5) * z) + 1 updates. On the phase's first update the current
// graph is snapshotted and a replacement matching is computed on the
// snapshot, its work spread evenly over the phase's remaining updates; at
// the phase's last update the replacement (pruned of edges deleted since the
// snapshot) is swapped in. Between swaps the output only ever loses edges
// (deleted matched edges are dropped immediately), so the per-step accuracy
// follows from the bounded drift of the optimum: the snapshot optimum plus
// the few updates of staleness. Short phases (small output) collapse to
// snapshot-and-swap within a single update, making the output exact there.
class StabilityMatcher {
 public:
  StabilityMatcher(NodeId n, StabilityParams params);

  const std::vector<EdgeChange>& insert(NodeId u, NodeId v);
  const std::vector<EdgeChange>& remove(NodeId u, NodeId v);
  const std::vector<EdgeChange>& apply(const UpdateEvent& ev);

  std::size_t size() const { return out_size_; }
  NodeId mate(NodeId v) const { return mate_out_[v]; }
  bool matched(NodeId u, NodeId v) const { return u < n_ && mate_out_[u] == v; }
  std::vector<std::pair<NodeId, NodeId>> matching() const;
  const DynamicGraph& graph() const { return g_; }
  const StabilityParams& params() const { return params_; }
  NodeId node_count() const { return n_; }

  std::size_t phase_length() const { return phase_len_; }
  std::size_t phase_position() const { return phase_pos_; }
  std::uint64_t phase_index() const { return phase_idx_; }
  bool rebuild_in_progress() const { return rebuild_active_; }

  std::uint64_t ops() const { return ops_.total; }

 private:
  const std::vector<EdgeChange>& step(const UpdateEvent& ev);
  void start_phase();
  void run_milestones(std::size_t k);
  void drain_rebuild();
  void swap_in_rebuild();
  void drop_output_edge(NodeId u, NodeId v);
  void record(EventKind kind, NodeId u, NodeId v);

  NodeId n_;
  StabilityParams params_;
  DynamicGraph g_;

  std::vector<NodeId> mate_out_;
  std::size_t out_size_ = 0;

  std::size_t phase_len_ = 0;
  std::size_t phase_pos_ = 0;  // updates consumed in the current phase
  std::uint64_t phase_idx_ = 0;

  MaxMatching engine_;
  std::vector<std::pair<NodeId, NodeId>> snapshot_edges_;
  std::size_t load_at_ = 0;
  NodeId sweep_at_ = 0;
  std::size_t milestones_left_ = 0;
  std::size_t milestones_per_update_ = 0;
  bool rebuild_active_ = false;
  std::unordered_set<std::uint64_t> dead_since_snapshot_;

  std::vector<EdgeChange> changes_;
  std::uint64_t seq_ = 0;
  OpCounter ops_;
};

// One-shot near-maximum matching for an explicit graph. The result carries no
// augmenting path of length <= 2*ceil(1/eps) - 1 (it is in fact maximum, which
// subsumes that guarantee for every eps); eps is validated to (0, 1/3] so call
// sites state the accuracy they rely on.
std::vector<std::pair<NodeId, NodeId>> static_near_max(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges, double eps);

}  // namespace dynmatch
