#include "dynmatch/folding.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <unordered_set>

namespace dynmatch {

FoldedGraph unfold_graph(NodeId n, const std::vector<WeightedEdge>& edges) {
  FoldedGraph f;
  f.source_nodes = n;
  f.source = edges;
  f.copies.assign(n, 0);

  std::unordered_set<std::uint64_t> seen;
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n)
      fail(ErrorCode::BadParameter, "node id out of range");
    if (e.u == e.v) fail(ErrorCode::SelfLoop, "self-loops are not allowed");
    if (e.w < 1)
      fail(ErrorCode::BadParameter, "edge weights must be positive integers");
    if (!seen.insert(edge_key(e.u, e.v)).second)
      fail(ErrorCode::DuplicateEdge, "duplicate weighted edge");
    f.copies[e.u] = std::max(f.copies[e.u], e.w);
    f.copies[e.v] = std::max(f.copies[e.v], e.w);
  }

  f.base.assign(n, 0);
  NodeId next = 0;
  for (NodeId v = 0; v < n; ++v) {
    f.base[v] = next;
    next += static_cast<NodeId>(f.copies[v]);
  }
  f.nodes = next;

  for (std::uint32_t idx = 0; idx < edges.size(); ++idx) {
    const auto& e = edges[idx];
    for (std::int64_t i = 1; i <= e.w; ++i) {
      NodeId a = f.id(e.u, i);
      NodeId b = f.id(e.v, e.w - i + 1);
      f.edges.emplace_back(a, b);
      f.origin[edge_key(a, b)] = idx;
    }
  }
  return f;
}

std::vector<WeightedEdge> refold_subgraph(
    const FoldedGraph& f, const std::vector<std::pair<NodeId, NodeId>>& sub) {
  std::vector<std::uint8_t> hit(f.source.size(), 0);
  for (auto [a, b] : sub) {
    auto it = f.origin.find(edge_key(a, b));
    if (it == f.origin.end())
      fail(ErrorCode::MissingEdge, "subgraph edge is not part of the expansion");
    hit[it->second] = 1;
  }
  std::vector<WeightedEdge> out;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (hit[i]) out.push_back(f.source[i]);
  return out;
}

std::vector<std::pair<NodeId, NodeId>> static_kernel(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges,
    std::uint32_t d) {
  if (d == 0) fail(ErrorCode::BadParameter, "degree cap must be positive");
  std::vector<std::uint32_t> dk(n, 0);
  std::vector<std::pair<NodeId, NodeId>> out;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) fail(ErrorCode::BadParameter, "node id out of range");
    if (dk[u] < d && dk[v] < d) {
      out.emplace_back(u, v);
      ++dk[u];
      ++dk[v];
    }
  }
  return out;
}

std::uint32_t folding_kernel_degree(double eps, std::int64_t max_weight) {
  if (!(eps > 0.0) || !(eps < 1.0))
    fail(ErrorCode::BadParameter,
         "accuracy parameter must lie strictly between 0 and 1");
  if (max_weight < 1)
    fail(ErrorCode::BadParameter, "maximum weight must be positive");
  double val = 144.0 / (eps * eps) *
               std::log(2.0 * static_cast<double>(max_weight) / eps);
  return static_cast<std::uint32_t>(std::ceil(val - 1e-9));
}

std::vector<WeightedEdge> read_weighted_edges(std::istream& in) {
  std::vector<WeightedEdge> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long u = 0, v = 0, w = 0;
    if (!(ls >> u >> v >> w) || u < 0 || v < 0 || w < 1)
      fail(ErrorCode::BadInput, "expected lines of the form 'u v w'");
    std::string rest;
    if (ls >> rest) fail(ErrorCode::BadInput, "trailing tokens after 'u v w'");
    out.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
  }
  return out;
}

}  // namespace dynmatch
