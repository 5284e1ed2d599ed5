#include "dynmatch/kernel.hpp"

namespace dynmatch {

KernelCheckReport check_kernel(const KernelView& k) {
  KernelCheckReport rep;
  const DynamicGraph& g = k.graph();
  NodeId n = g.node_count();
  const int d = static_cast<int>(k.params().d);
  const int p2 = static_cast<int>(k.params().p2_threshold());

  // Recompute degrees from the kernel edge list (independent of the
  // maintainer's table) and verify the subset property.
  std::vector<int> deg(n, 0);
  for (auto [u, v] : k.kernel_edges()) {
    if (!g.has_edge(u, v)) rep.subset = false;
    ++deg[u];
    ++deg[v];
  }
  for (NodeId v = 0; v < n; ++v) {
    if (deg[v] > d) rep.p1 = false;
    if (deg[v] != static_cast<int>(k.kernel_degree(v)))
      rep.degrees_consistent = false;
  }
  for (auto [u, v] : g.edges()) {
    if (k.in_kernel(u, v)) continue;
    if (deg[u] < p2 && deg[v] < p2) {
      rep.p2 = false;
      rep.witness_u = u;
      rep.witness_v = v;
    }
  }
  return rep;
}

}  // namespace dynmatch
