#include "dynmatch/oracle.hpp"

#include <algorithm>

namespace dynmatch {

std::int64_t max_weight_matching_small(NodeId n, const std::vector<WeightedEdge>& edges) {
  if (n > 22) fail(ErrorCode::BadParameter, "max_weight_matching_small: n too large");
  std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, -1));
  for (const auto& e : edges) {
    if (e.u == e.v || e.u >= n || e.v >= n)
      fail(ErrorCode::BadInput, "max_weight_matching_small: bad edge");
    w[e.u][e.v] = std::max(w[e.u][e.v], e.w);
    w[e.v][e.u] = w[e.u][e.v];
  }
  const std::size_t full = std::size_t{1} << n;
  std::vector<std::int64_t> f(full, 0);
  for (std::size_t s = 1; s < full; ++s) {
    const int v = __builtin_ctzll(s);
    const std::size_t rest = s & (s - 1);  // s without v
    std::int64_t best = f[rest];           // v stays unmatched
    std::size_t cand = rest;
    while (cand) {
      const int u = __builtin_ctzll(cand);
      cand &= cand - 1;
      if (w[v][u] >= 0) best = std::max(best, w[v][u] + f[rest & ~(std::size_t{1} << u)]);
    }
    f[s] = best;
  }
  return f[full - 1];
}

std::vector<std::pair<NodeId, NodeId>> greedy_maximal_matching(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::uint8_t> used(n, 0);
  std::vector<std::pair<NodeId, NodeId>> out;
  for (auto [u, v] : edges) {
    if (u == v || used[u] || used[v]) continue;
    used[u] = 1;
    used[v] = 1;
    out.emplace_back(u, v);
  }
  return out;
}

}  // namespace dynmatch
