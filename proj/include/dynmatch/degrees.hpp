#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/graph.hpp"

namespace dynmatch {

struct DegreeParams {
  double alpha = 1.0;            // additive accuracy of the degree counters
  std::uint32_t max_degree = 1;  // host graph degree cap (sets the refresh quota)
  void validate() const;
};

// Maintains, for every adjacent pair (u,v), a counter d^u(v) approximating
// v's degree in a tracked subgraph ("kernel") to within +/- alpha.
//
// Machinery: each node keeps a cyclic refresh cursor over its neighbor ring.
// When a node's kernel degree changes, its cursor advances ceil(Delta/alpha)
// times and every visited neighbor's counter for that node is set to the exact
// kernel degree. Within any alpha further changes to that degree the cursor
// completes a full ring cycle, so no counter drifts further than alpha. A new
// edge starts with exact counters in both directions.
//
// Counter writes caused by one kernel change therefore form at most two stars
// (one per endpoint of the changed edge) of at most ceil(Delta/alpha) leaves.
class DegreeTracker {
 public:
  DegreeTracker(NodeId n, DegreeParams params);

  // Host graph edge maintenance. Insertion initializes both counters exactly;
  // an edge still in the tracked subgraph cannot be deleted.
  void insert_edge(NodeId u, NodeId v);
  void delete_edge(NodeId u, NodeId v);

  // Applies one tracked-subgraph edge event (the edge must exist in the host
  // graph) and runs the refresh rounds for both endpoints. Returns the
  // (holder, subject) counter writes, deduplicated, subject-major: all writes
  // for the first endpoint precede those for the second. The buffer is reused
  // by the next call.
  const std::vector<std::pair<NodeId, NodeId>>& apply_kernel_change(
      EventKind kind, NodeId u, NodeId v);

  NodeId node_count() const { return n_; }
  const DynamicGraph& graph() const { return g_; }
  std::uint32_t kernel_degree(NodeId v) const;
  bool kernel_has_edge(NodeId u, NodeId v) const;
  std::size_t kernel_edge_count() const { return kernel_edges_.size(); }
  // d^holder(subject); the pair must be adjacent in the host graph.
  std::uint32_t counter(NodeId holder, NodeId subject) const;
  std::uint32_t quota() const { return quota_; }
  const DegreeParams& params() const { return params_; }
  std::uint64_t ops() const { return ops_.total; }

 private:
  void refresh_ring(NodeId subject, std::unordered_set<std::uint64_t>& seen);
  static std::uint64_t directed_key(NodeId holder, NodeId subject) {
    return (static_cast<std::uint64_t>(holder) << 32) | subject;
  }

  NodeId n_;
  DegreeParams params_;
  std::uint32_t quota_;
  DynamicGraph g_;
  std::vector<std::uint32_t> dk_;
  std::unordered_set<std::uint64_t> kernel_edges_;
  std::unordered_map<std::uint64_t, std::uint32_t> counters_;
  std::vector<std::pair<NodeId, NodeId>> writes_;
  OpCounter ops_;
};

struct SubgraphParams {
  double eps = 0.1;   // family count is ceil(1/eps)
  double s = 0.2;     // low-side threshold offset
  std::uint32_t d = 1;  // degree scale of the tracked subgraph
  void validate() const;
};

enum class Family : std::uint8_t { SH = 0, H = 1 };

// One membership change batch for a threshold subgraph: a star of edges
// sharing `star.center`, all lying on the same side of the bipartition.
struct SubgraphStar {
  Family family;
  std::uint32_t index;  // 1-based family index
  bool center_high;
  StarUpdate star;
};

// Derived bipartite edge families over the approximate degree counters. For
// each index i in 1..ceil(1/eps), an adjacent pair (u,v) with counters
// c_uv = d^u(v), c_vu = d^v(u) belongs (with v on the high side) to
//   H_i  iff c_uv >= ceil(d*(1-2s-i*eps^2))  and  c_vu <= floor(d*(s+i*eps^2))
//   SH_i iff c_uv >= ceil(d*(1-eps-i*eps^2)) and  c_vu <= floor(d*(s+i*eps^2))
// Construction validates that the low band stays strictly below both high
// bands for every index, which makes the high/low orientation of a member
// edge unique, and that SH_i is contained in H_i (eps <= 2s).
class ThresholdSubgraphs {
 public:
  // Collects membership flips and groups them into stars keyed by
  // (index, family, delete-before-insert, center, side) so emission order is
  // deterministic.
  class StarCollector {
   public:
    void add(Family family, std::uint32_t index, EventKind kind, NodeId center,
             bool center_high, NodeId leaf);
    std::vector<SubgraphStar> emit() const;

   private:
    std::map<std::tuple<std::uint32_t, int, int, NodeId, bool>,
             std::vector<NodeId>>
        groups_;
  };

  ThresholdSubgraphs(NodeId n, SubgraphParams params);

  std::uint32_t family_count() const { return families_; }
  std::uint32_t high_floor(Family f, std::uint32_t index) const;
  std::uint32_t low_ceiling(std::uint32_t index) const;

  // Re-evaluates the pair (a,b) against fresh counter values, attributing any
  // membership flips to a star centered at `center` (one of a, b). Flips of
  // edges no longer member under any index erase the stored entry.
  void reevaluate(NodeId a, NodeId b, std::uint32_t c_ab, std::uint32_t c_ba,
                  NodeId center, StarCollector& out);

  // Removes (a,b) from every family it belongs to (host edge deleted),
  // attributing flips to its stored low endpoint.
  void drop_edge(NodeId a, NodeId b, StarCollector& out);

  bool contains(Family f, std::uint32_t index, NodeId u, NodeId v) const;
  std::size_t edge_count(Family f, std::uint32_t index) const;
  // Member edges as (low, high) pairs, sorted for deterministic iteration.
  std::vector<std::pair<NodeId, NodeId>> snapshot(Family f,
                                                  std::uint32_t index) const;
  const SubgraphParams& params() const { return params_; }
  std::uint64_t ops() const { return ops_.total; }

 private:
  struct Mem {
    std::uint64_t h_mask = 0;
    std::uint64_t sh_mask = 0;
    NodeId lo = kNoNode;
    NodeId hi = kNoNode;
  };

  void check_index(std::uint32_t index) const;

  NodeId n_;
  SubgraphParams params_;
  std::uint32_t families_;
  std::vector<std::uint32_t> h_lo_, sh_lo_, lo_hi_;  // per index, 0-based
  std::unordered_map<std::uint64_t, Mem> mem_;
  std::vector<std::size_t> count_h_, count_sh_;
  OpCounter ops_;
};

// Applies one kernel edge event end to end: refreshes the degree counters and
// re-evaluates every touched pair, returning the membership stars in emission
// order (index ascending, SH before H, deletions before insertions).
std::vector<SubgraphStar> on_kernel_change(DegreeTracker& tracker,
                                           ThresholdSubgraphs& subgraphs,
                                           EventKind kind, NodeId u, NodeId v);

// Host-graph edge wiring: insertion initializes counters and may immediately
// admit the new pair; deletion evicts the pair from every family.
std::vector<SubgraphStar> on_graph_insert(DegreeTracker& tracker,
                                          ThresholdSubgraphs& subgraphs,
                                          NodeId u, NodeId v);
std::vector<SubgraphStar> on_graph_delete(DegreeTracker& tracker,
                                          ThresholdSubgraphs& subgraphs,
                                          NodeId u, NodeId v);

}  // namespace dynmatch
