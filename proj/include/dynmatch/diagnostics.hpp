#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/degrees.hpp"
#include "dynmatch/recourse.hpp"

namespace dynmatch {

// Read-only structural diagnostics over frozen snapshots of a graph and a
// claimed kernel subgraph. Every analysis recomputes from scratch against
// exact matching oracles and mutates nothing, so snapshots can be analyzed
// concurrently. Results are plain records; none of the reported inequality
// flags throw on their own.

// A frozen graph plus a claimed kernel subgraph. `params` supplies the degree
// scale d and the slack parameters that the class thresholds and the
// fractional-mass floors are measured against; `params.eps` doubles as the
// kernel's cover slack (a skipped edge is expected to have an endpoint of
// kernel degree at least d*(1-eps)).
struct KernelSnapshot {
  NodeId n = 0;
  std::vector<std::pair<NodeId, NodeId>> graph;
  std::vector<std::pair<NodeId, NodeId>> kernel;
  SubgraphParams params;

  // Errors unless every edge is in range and loop-free, the edge lists are
  // duplicate-free, and the kernel is a subset of the graph. Does not demand
  // that the kernel actually satisfies its degree properties: measuring the
  // quality of imperfect kernels is the point of these diagnostics.
  void validate() const;
  std::vector<std::uint32_t> kernel_degrees() const;
};

// Fractional edge weights certifying a kernel's matching mass: weight 1/d on
// kernel edges off the reference matching, and the clipped degree complement
//   max(0, 1 - (deg_K(u) + deg_K(v) - 2) / d)
// on kernel edges (u,v) of the reference matching.
struct FractionalMatching {
  std::vector<double> x;  // per kernel edge, aligned with KernelSnapshot::kernel
  std::vector<double> y;  // per node, total incident mass
  double total = 0.0;     // sum of x
  std::size_t mu = 0;     // maximum matching size of the whole graph
  bool valid = false;          // x >= 0 and y <= 1 everywhere
  bool size_bound_ok = false;  // total >= (1 - eps)/2 * mu
  // Per-edge mass floors over the reference matching, with e = (u,v) and
  // S = y_u + y_v:
  //   e outside the kernel:                          S >= 1 - eps
  //   e inside the kernel:                           S >= 1
  //   degree sum >= d*(1+s-2*eps):                   S >= 1 + s - 4*eps
  //   inside and degree sum <= d*(1-s+2*eps):        S >= 1 + s - 2*eps
  // The first floor relies on the kernel's cover property and the third on
  // d >= 1/eps; on snapshots violating those the flag reports false.
  bool edge_bounds_ok = false;
};

// `mstar` must be a maximum matching of the snapshot graph (BadInput
// otherwise); maximality is certified against the exact oracle.
FractionalMatching kernel_fractional_matching(const KernelSnapshot& k,
                                              const Matching& mstar);

// Census of reference-matching edges whose kernel-degree sums are extremal:
// `high` edges have degree sum >= d*(1+s-2*eps), `low` edges lie inside the
// kernel with degree sum <= d*(1-s+2*eps). When the graph optimum certifies
// that the kernel loses almost a factor two (mu_graph >= (2-delta)*mu_kernel),
// such edges number at most (delta/s)*|M*|.
struct ExtremalEdgeCount {
  std::size_t count = 0;  // high + low
  std::size_t high = 0;
  std::size_t low = 0;
  std::size_t mu_graph = 0;
  std::size_t mu_kernel = 0;
  bool two_approx = false;  // mu_graph >= (2 - delta) * mu_kernel
  double bound = 0.0;       // (delta / s) * |mstar|
  bool bound_ok = false;    // count <= bound; vacuously true unless two_approx
};

// `mstar` must be a valid matching of the snapshot graph; it need not be
// maximum (an empty matching yields count 0). `delta` must lie in (0, 1).
ExtremalEdgeCount count_degree_extremal_edges(const KernelSnapshot& k,
                                              const Matching& mstar,
                                              double delta);

// Per-node degree classes at one family index i in 1..ceil(1/eps), measured
// against exact kernel degrees with the same integer thresholds the live
// threshold-subgraph structures use:
//   super-high:  deg_K >= ceil(d*(1 - eps - i*eps^2))
//   high:        deg_K >= ceil(d*(1 - 2s - i*eps^2))
//   low:         deg_K <= floor(d*(s + i*eps^2))
//   medium:      everything else
// high, medium and low partition the nodes; super-high is contained in high.
struct NodeClassification {
  std::uint32_t index = 0;
  std::vector<std::uint8_t> super_high, high, medium, low;  // per-node flags
  std::size_t count_super_high = 0;
  std::size_t count_high = 0;
  std::size_t count_medium = 0;
  std::size_t count_low = 0;
};

NodeClassification classify_nodes(const KernelSnapshot& k, std::uint32_t index);

// Taxonomy of the length-3 augmenting paths of the symmetric difference
// between a maximum kernel matching M and a maximum graph matching M*. Each
// path is oriented v1-v2-v3-v4 so that the trailing reference edge (v3,v4)
// lies outside the kernel (M's maximality inside the kernel guarantees an
// orientation with that property) and tagged by the first matching class
// pattern at the given family index:
//   type 1: low, super-high, super-high, low
//   type 2: low, high-not-super, super-high, low,   with (v1,v2) in the kernel
//   type 3: medium, high-not-super, super-high, low, with (v1,v2) in the kernel
//   type 4: medium, medium, super-high, low,         with (v1,v2) in the kernel
// Paths fitting no pattern under either admissible orientation count as
// `patternless`, and their matched nodes are flagged for special handling.
struct PathTaxonomy {
  std::uint32_t index = 0;
  std::vector<std::array<NodeId, 4>> paths;  // oriented v1-v2-v3-v4
  std::vector<int> types;                    // parallel to paths; 1..4, 0 = patternless
  std::size_t n1 = 0, n2 = 0, n3 = 0, n4 = 0;
  std::size_t patterned = 0;    // n1 + n2 + n3 + n4
  std::size_t patternless = 0;
  std::vector<NodeId> flagged_nodes;  // sorted matched nodes on patternless paths

  // Filled only when approximate degree counters are supplied: for each family
  // index j (entry 0 unused), how many path nodes some stale counter would
  // place outside their true class, plus the smallest index minimizing that.
  std::vector<std::size_t> misclassified;
  std::uint32_t best_index = 0;
  std::size_t misclassified_at_best = 0;
};

// `m` must be a maximum matching of the kernel and `mstar` a maximum matching
// of the graph (both certified against the oracle; BadInput otherwise). When
// `approx` is given it must be in sync with the snapshot (same node count,
// same kernel degrees); its per-neighbor counters drive the misclassification
// report.
PathTaxonomy classify_paths(const KernelSnapshot& k, const Matching& m,
                            const Matching& mstar, std::uint32_t index,
                            const DegreeTracker* approx = nullptr);

// How many matched edges sit on length-3 augmenting paths toward the optimum.
// Any maximal matching at most (1/2 + eps) of the optimum must leave at least
// (1/2 - 3*eps) of the optimum's edges on such paths.
struct ThreeAugmentable {
  std::size_t count = 0;
  std::size_t mu = 0;
  std::size_t matching_size = 0;
  bool half_approx = false;  // matching_size <= (1/2 + eps) * mu
  bool bound_ok = false;     // count >= (1/2 - 3*eps) * mu; vacuous unless half_approx
};

// `m` must be a maximal matching of the edge list (BadInput otherwise);
// `eps` must lie in (0, 1).
ThreeAugmentable count_three_augmentable(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges,
    const Matching& m, double eps);

// Searches over maximum kernel matchings for one covering as many high-class
// nodes as possible and reports how many stay uncovered. The asymptotic
// theory promises at most 7*s*mu_kernel uncovered in the regimes it targets;
// that quantity is reported for comparison, never asserted, because small
// instances can exceed it legitimately.
struct HighCoverage {
  std::uint32_t index = 0;
  std::size_t high_nodes = 0;
  std::size_t covered = 0;
  std::size_t uncovered = 0;
  std::size_t mu_kernel = 0;
  double reported_bound = 0.0;  // 7 * s * mu_kernel
};

HighCoverage high_node_coverage(const KernelSnapshot& k, std::uint32_t index);

}  // namespace dynmatch
