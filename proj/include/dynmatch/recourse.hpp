#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "dynmatch/common.hpp"

namespace dynmatch {

using Matching = std::vector<std::pair<NodeId, NodeId>>;

// One step of a matching transformation: at most one edge removal followed by
// at most one edge addition. Applying the removal before the addition keeps
// the edge set a valid matching at every point inside the step as well.
struct PlanStep {
  NodeId remove_u = kNoNode;
  NodeId remove_v = kNoNode;
  NodeId add_u = kNoNode;
  NodeId add_v = kNoNode;

  bool has_remove() const { return remove_u != kNoNode; }
  bool has_add() const { return add_u != kNoNode; }
};

// An ordered schedule that turns a source matching into a target matching.
//
// Guarantees (established by plan_transform, checked by tests):
//   - executing all steps yields exactly the target matching (a superset of
//     the target once dead-edge additions are skipped by the executor);
//   - after every step the edge set is a valid matching;
//   - every intermediate size is >= min(source size, target size) - 1;
//   - consecutive matchings differ by at most two edges;
//   - total steps <= |source XOR target| <= |source| + |target|.
struct TransformPlan {
  std::vector<PlanStep> steps;
  std::size_t cursor = 0;

  std::size_t remaining() const { return steps.size() - cursor; }
};

// Builds a transformation schedule from `from` to `to` in time linear in the
// two matchings. The symmetric difference decomposes into alternating paths
// and cycles; size-increasing paths are scheduled first, and each component is
// walked so that a removal is always bundled with the addition that re-covers
// the freed endpoint. Throws BadInput if either argument is not a valid
// matching over nodes [0, n).
TransformPlan plan_transform(NodeId n, const Matching& from, const Matching& to);

struct RecourseParams {
  double eps = 0.1;  // must lie in (0, 1/6)
  void validate() const;
};

// Wraps any dynamic matching algorithm and re-emits its output with a hard
// per-update bound on the number of changes (recourse).
//
// The caller advances the inner algorithm first, then reports the inner
// matching here once per logical update (a star update counts as one update).
// Updates are grouped into phases of max(1, floor(eps * target size)) calls.
// At each phase boundary the wrapper snapshots the inner matching and builds a
// transformation plan from its own output toward that snapshot; the plan is
// spread evenly over the phase, so the output trails the inner matching by at
// most two phases of staleness and loses at most a (1 + 6*eps) factor against
// an inner algorithm whose size stays within a factor of two of optimal.
// Targets of size <= 1 are adopted immediately.
//
// Per-update changes are capped at ceil(kRecourseConstant / eps) no matter how
// the inner matching behaves; with a well-behaved inner algorithm the cap is
// never reached and every plan completes within its phase.
class RecourseLimiter {
 public:
  static constexpr int kRecourseConstant = 16;

  RecourseLimiter(NodeId n, RecourseParams params);

  // Processes one logical update. `inner` is the inner algorithm's matching
  // after the update; `deleted` / `inserted` are the host edges removed and
  // added by the update (deleted output edges are dropped immediately; a
  // re-inserted edge becomes adoptable again). Returns this update's output
  // changes, seq-stamped; the buffer is reused by the next call.
  const std::vector<EdgeChange>& apply(const Matching& inner,
                                       const Matching& deleted = {},
                                       const Matching& inserted = {});

  NodeId node_count() const { return n_; }
  std::size_t size() const { return out_size_; }
  NodeId mate(NodeId u) const;
  Matching matching() const;

  std::size_t max_changes_per_update() const { return cap_; }
  std::size_t phase_length() const { return phase_len_; }
  std::size_t phase_position() const { return phase_pos_; }
  std::size_t plan_steps_remaining() const { return plan_.remaining(); }
  const RecourseParams& params() const { return params_; }
  std::uint64_t ops() const { return ops_.total; }

 private:
  void replan(const Matching& inner);
  bool execute_step(const PlanStep& step);
  void drop_edge(NodeId u, NodeId v);
  void add_edge(NodeId u, NodeId v);
  void record(EventKind kind, NodeId u, NodeId v);

  NodeId n_;
  RecourseParams params_;
  std::size_t cap_;

  std::vector<NodeId> mate_out_;
  std::size_t out_size_ = 0;

  TransformPlan plan_;
  std::size_t target_size_ = 0;
  std::size_t quota_ = 0;      // plan steps per update within the phase
  std::size_t phase_len_ = 0;  // updates in the current phase
  std::size_t phase_pos_ = 0;  // updates already consumed in the phase

  // Edges deleted since the current plan was built; additions naming them are
  // skipped. Re-insertion removes the key again.
  std::unordered_set<std::uint64_t> dead_;

  std::vector<EdgeChange> changes_;
  std::uint64_t seq_ = 0;
  OpCounter ops_;
};

}  // namespace dynmatch
