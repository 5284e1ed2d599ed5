#include "dynmatch/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "dynmatch/blossom.hpp"

namespace dynmatch {

namespace {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

std::unordered_set<std::uint64_t> checked_edge_set(NodeId n,
                                                   const EdgeList& edges,
                                                   const char* what) {
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n)
      fail(ErrorCode::BadInput, std::string(what) + ": edge endpoint out of range");
    if (u == v) fail(ErrorCode::SelfLoop, std::string(what) + ": self loop");
    if (!keys.insert(edge_key(u, v)).second)
      fail(ErrorCode::DuplicateEdge, std::string(what) + ": duplicate edge");
  }
  return keys;
}

// Validates pair-disjointness and host membership; returns the mate array.
std::vector<NodeId> checked_mates(NodeId n, const Matching& m,
                                  const std::unordered_set<std::uint64_t>& host,
                                  const char* what) {
  std::vector<NodeId> mate(n, kNoNode);
  for (const auto& [u, v] : m) {
    if (u >= n || v >= n)
      fail(ErrorCode::BadInput, std::string(what) + ": endpoint out of range");
    if (u == v) fail(ErrorCode::SelfLoop, std::string(what) + ": self loop");
    if (host.count(edge_key(u, v)) == 0)
      fail(ErrorCode::BadInput, std::string(what) + ": edge not in the host graph");
    if (mate[u] != kNoNode || mate[v] != kNoNode)
      fail(ErrorCode::BadInput, std::string(what) + ": node matched twice");
    mate[u] = v;
    mate[v] = u;
  }
  return mate;
}

// Length-3 augmenting paths of M (+) M*, each ordered p0-p1-p2-p3 with the
// outer edges in M* and p0 < p3.
std::vector<std::array<NodeId, 4>> short_augmenting_paths(
    NodeId n, const std::vector<NodeId>& mate_m,
    const std::vector<NodeId>& mate_s) {
  // In the symmetric difference every node has degree at most two: its M edge
  // (unless shared with M*) and its M* edge (unless shared with M).
  auto diff_neighbors = [&](NodeId v, std::array<NodeId, 2>& out) {
    int cnt = 0;
    if (mate_m[v] != kNoNode && mate_m[v] != mate_s[v]) out[cnt++] = mate_m[v];
    if (mate_s[v] != kNoNode && mate_s[v] != mate_m[v]) out[cnt++] = mate_s[v];
    return cnt;
  };

  std::vector<std::array<NodeId, 4>> paths;
  std::vector<char> visited(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (visited[v]) continue;
    std::array<NodeId, 2> nb{};
    if (diff_neighbors(v, nb) != 1) continue;  // path components start at ends
    std::vector<NodeId> walk{v};
    visited[v] = 1;
    NodeId prev = v;
    NodeId at = nb[0];
    while (true) {
      walk.push_back(at);
      visited[at] = 1;
      std::array<NodeId, 2> next{};
      int cnt = diff_neighbors(at, next);
      NodeId nxt = kNoNode;
      for (int i = 0; i < cnt; ++i)
        if (next[i] != prev) nxt = next[i];
      if (nxt == kNoNode) break;
      prev = at;
      at = nxt;
    }
    if (walk.size() != 4) continue;
    NodeId a = walk[0], b = walk[1], c = walk[2], d = walk[3];
    // Augmenting for M: outer edges in M*, middle edge in M, free ends.
    if (mate_s[a] == b && mate_m[b] == c && mate_s[c] == d &&
        mate_m[a] == kNoNode && mate_m[d] == kNoNode) {
      if (d < a) std::swap(a, d), std::swap(b, c);
      paths.push_back({a, b, c, d});
    }
  }
  // Cycle components contain no augmenting path; they need no visiting pass
  // because nothing below reads `visited` again.
  return paths;
}

struct ClassThresholds {
  std::uint32_t super_high = 0;
  std::uint32_t high = 0;
  std::uint32_t low = 0;
};

ClassThresholds thresholds_at(const ThresholdSubgraphs& ts, std::uint32_t index) {
  return {ts.high_floor(Family::SH, index), ts.high_floor(Family::H, index),
          ts.low_ceiling(index)};
}

// 0 = super-high, 1 = high-not-super, 2 = medium, 3 = low.
int class_code(std::uint32_t dk, const ClassThresholds& t) {
  if (dk <= t.low) return 3;
  if (dk >= t.super_high) return 0;
  if (dk >= t.high) return 1;
  return 2;
}

void check_index(std::uint32_t index, std::uint32_t families) {
  if (index < 1 || index > families)
    fail(ErrorCode::BadParameter, "family index out of range");
}

}  // namespace

void KernelSnapshot::validate() const {
  params.validate();
  auto graph_keys = checked_edge_set(n, graph, "snapshot graph");
  auto kernel_keys = checked_edge_set(n, kernel, "snapshot kernel");
  for (const auto& [u, v] : kernel)
    if (graph_keys.count(edge_key(u, v)) == 0)
      fail(ErrorCode::BadInput, "snapshot kernel: edge missing from the graph");
  (void)kernel_keys;
}

std::vector<std::uint32_t> KernelSnapshot::kernel_degrees() const {
  std::vector<std::uint32_t> dk(n, 0);
  for (const auto& [u, v] : kernel) {
    ++dk[u];
    ++dk[v];
  }
  return dk;
}

FractionalMatching kernel_fractional_matching(const KernelSnapshot& k,
                                              const Matching& mstar) {
  k.validate();
  auto graph_keys = checked_edge_set(k.n, k.graph, "snapshot graph");
  auto kernel_keys = checked_edge_set(k.n, k.kernel, "snapshot kernel");
  checked_mates(k.n, mstar, graph_keys, "reference matching");
  std::size_t mu = max_matching_size(k.n, k.graph);
  if (mstar.size() != mu)
    fail(ErrorCode::BadInput, "reference matching is not maximum in the graph");

  std::unordered_set<std::uint64_t> star_keys;
  star_keys.reserve(mstar.size() * 2);
  for (const auto& [u, v] : mstar) star_keys.insert(edge_key(u, v));

  const double d = static_cast<double>(k.params.d);
  const double eps = k.params.eps;
  const double s = k.params.s;
  auto dk = k.kernel_degrees();

  FractionalMatching out;
  out.mu = mu;
  out.x.resize(k.kernel.size(), 0.0);
  out.y.resize(k.n, 0.0);
  for (std::size_t i = 0; i < k.kernel.size(); ++i) {
    const auto [u, v] = k.kernel[i];
    double w;
    if (star_keys.count(edge_key(u, v)) != 0) {
      double degsum = static_cast<double>(dk[u]) + static_cast<double>(dk[v]);
      w = std::max(0.0, 1.0 - (degsum - 2.0) / d);
    } else {
      w = 1.0 / d;
    }
    out.x[i] = w;
    out.y[u] += w;
    out.y[v] += w;
    out.total += w;
  }

  out.valid = true;
  for (double w : out.x)
    if (w < 0.0) out.valid = false;
  for (double m : out.y)
    if (m > 1.0 + 1e-9) out.valid = false;
  out.size_bound_ok =
      out.total + 1e-9 >= 0.5 * (1.0 - eps) * static_cast<double>(mu);

  out.edge_bounds_ok = true;
  for (const auto& [u, v] : mstar) {
    const bool in_kernel = kernel_keys.count(edge_key(u, v)) != 0;
    const double degsum = static_cast<double>(dk[u]) + static_cast<double>(dk[v]);
    double floor_mass = in_kernel ? 1.0 : 1.0 - eps;
    if (degsum + 1e-9 >= d * (1.0 + s - 2.0 * eps))
      floor_mass = std::max(floor_mass, 1.0 + s - 4.0 * eps);
    if (in_kernel && degsum <= d * (1.0 - s + 2.0 * eps) + 1e-9)
      floor_mass = std::max(floor_mass, 1.0 + s - 2.0 * eps);
    if (out.y[u] + out.y[v] + 1e-9 < floor_mass) out.edge_bounds_ok = false;
  }
  return out;
}

ExtremalEdgeCount count_degree_extremal_edges(const KernelSnapshot& k,
                                              const Matching& mstar,
                                              double delta) {
  k.validate();
  if (!(delta > 0.0) || !(delta < 1.0))
    fail(ErrorCode::BadParameter, "delta must be in (0, 1)");
  auto graph_keys = checked_edge_set(k.n, k.graph, "snapshot graph");
  auto kernel_keys = checked_edge_set(k.n, k.kernel, "snapshot kernel");
  checked_mates(k.n, mstar, graph_keys, "reference matching");

  const double d = static_cast<double>(k.params.d);
  const double eps = k.params.eps;
  const double s = k.params.s;
  auto dk = k.kernel_degrees();

  ExtremalEdgeCount out;
  for (const auto& [u, v] : mstar) {
    const double degsum = static_cast<double>(dk[u]) + static_cast<double>(dk[v]);
    if (degsum + 1e-9 >= d * (1.0 + s - 2.0 * eps)) {
      ++out.high;
    } else if (kernel_keys.count(edge_key(u, v)) != 0 &&
               degsum <= d * (1.0 - s + 2.0 * eps) + 1e-9) {
      ++out.low;
    }
  }
  out.count = out.high + out.low;
  out.mu_graph = max_matching_size(k.n, k.graph);
  out.mu_kernel = max_matching_size(k.n, k.kernel);
  out.two_approx = static_cast<double>(out.mu_graph) + 1e-9 >=
                   (2.0 - delta) * static_cast<double>(out.mu_kernel);
  out.bound = delta / s * static_cast<double>(mstar.size());
  out.bound_ok =
      !out.two_approx || static_cast<double>(out.count) <= out.bound + 1e-9;
  return out;
}

NodeClassification classify_nodes(const KernelSnapshot& k, std::uint32_t index) {
  k.validate();
  ThresholdSubgraphs ts(k.n, k.params);
  check_index(index, ts.family_count());
  const auto t = thresholds_at(ts, index);
  auto dk = k.kernel_degrees();

  NodeClassification out;
  out.index = index;
  out.super_high.assign(k.n, 0);
  out.high.assign(k.n, 0);
  out.medium.assign(k.n, 0);
  out.low.assign(k.n, 0);
  for (NodeId v = 0; v < k.n; ++v) {
    switch (class_code(dk[v], t)) {
      case 0:
        out.super_high[v] = 1;
        out.high[v] = 1;
        ++out.count_super_high;
        ++out.count_high;
        break;
      case 1:
        out.high[v] = 1;
        ++out.count_high;
        break;
      case 2:
        out.medium[v] = 1;
        ++out.count_medium;
        break;
      default:
        out.low[v] = 1;
        ++out.count_low;
        break;
    }
  }
  return out;
}

PathTaxonomy classify_paths(const KernelSnapshot& k, const Matching& m,
                            const Matching& mstar, std::uint32_t index,
                            const DegreeTracker* approx) {
  k.validate();
  ThresholdSubgraphs ts(k.n, k.params);
  check_index(index, ts.family_count());
  auto graph_keys = checked_edge_set(k.n, k.graph, "snapshot graph");
  auto kernel_keys = checked_edge_set(k.n, k.kernel, "snapshot kernel");
  auto mate_m = checked_mates(k.n, m, kernel_keys, "kernel matching");
  auto mate_s = checked_mates(k.n, mstar, graph_keys, "reference matching");
  if (m.size() != max_matching_size(k.n, k.kernel))
    fail(ErrorCode::BadInput, "kernel matching is not maximum in the kernel");
  if (mstar.size() != max_matching_size(k.n, k.graph))
    fail(ErrorCode::BadInput, "reference matching is not maximum in the graph");

  auto dk = k.kernel_degrees();
  if (approx != nullptr) {
    if (approx->node_count() != k.n)
      fail(ErrorCode::BadInput, "degree tracker node count mismatch");
    for (NodeId v = 0; v < k.n; ++v)
      if (approx->kernel_degree(v) != dk[v])
        fail(ErrorCode::BadInput, "degree tracker out of sync with the snapshot");
  }

  PathTaxonomy out;
  out.index = index;
  const auto t = thresholds_at(ts, index);
  auto code = [&](NodeId v) { return class_code(dk[v], t); };
  auto fits = [&](int type, const std::array<NodeId, 4>& p) {
    const int c1 = code(p[0]), c2 = code(p[1]), c3 = code(p[2]), c4 = code(p[3]);
    if (c3 != 0 || c4 != 3) return false;  // every pattern ends super-high, low
    switch (type) {
      case 1:
        return c1 == 3 && c2 == 0;
      case 2:
        return c1 == 3 && c2 == 1 && kernel_keys.count(edge_key(p[0], p[1])) != 0;
      case 3:
        return c1 == 2 && c2 == 1 && kernel_keys.count(edge_key(p[0], p[1])) != 0;
      case 4:
        return c1 == 2 && c2 == 2 && kernel_keys.count(edge_key(p[0], p[1])) != 0;
      default:
        return false;
    }
  };

  for (const auto& p : short_augmenting_paths(k.n, mate_m, mate_s)) {
    std::vector<std::array<NodeId, 4>> orientations;
    if (kernel_keys.count(edge_key(p[2], p[3])) == 0) orientations.push_back(p);
    if (kernel_keys.count(edge_key(p[1], p[0])) == 0)
      orientations.push_back({p[3], p[2], p[1], p[0]});
    if (orientations.empty())
      fail(ErrorCode::BadInput,
           "augmenting path with both reference edges inside the kernel");
    int type = 0;
    std::array<NodeId, 4> chosen = orientations.front();
    for (int cand = 1; cand <= 4 && type == 0; ++cand)
      for (const auto& o : orientations)
        if (fits(cand, o)) {
          type = cand;
          chosen = o;
          break;
        }
    out.paths.push_back(chosen);
    out.types.push_back(type);
    switch (type) {
      case 1: ++out.n1; break;
      case 2: ++out.n2; break;
      case 3: ++out.n3; break;
      case 4: ++out.n4; break;
      default:
        ++out.patternless;
        for (NodeId v : chosen)
          if (mate_m[v] != kNoNode) out.flagged_nodes.push_back(v);
        break;
    }
  }
  out.patterned = out.n1 + out.n2 + out.n3 + out.n4;
  std::sort(out.flagged_nodes.begin(), out.flagged_nodes.end());
  out.flagged_nodes.erase(
      std::unique(out.flagged_nodes.begin(), out.flagged_nodes.end()),
      out.flagged_nodes.end());

  if (approx != nullptr) {
    std::vector<NodeId> nodes;
    for (const auto& p : out.paths) nodes.insert(nodes.end(), p.begin(), p.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    const std::uint32_t fam = ts.family_count();
    out.misclassified.assign(fam + 1, 0);
    for (std::uint32_t j = 1; j <= fam; ++j) {
      const auto tj = thresholds_at(ts, j);
      for (NodeId v : nodes) {
        const int base = class_code(dk[v], tj);
        for (NodeId u : approx->graph().neighbors(v)) {
          if (class_code(approx->counter(u, v), tj) != base) {
            ++out.misclassified[j];
            break;
          }
        }
      }
    }
    out.best_index = 1;
    for (std::uint32_t j = 2; j <= fam; ++j)
      if (out.misclassified[j] < out.misclassified[out.best_index])
        out.best_index = j;
    out.misclassified_at_best = out.misclassified[out.best_index];
  }
  return out;
}

ThreeAugmentable count_three_augmentable(NodeId n, const EdgeList& edges,
                                         const Matching& m, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    fail(ErrorCode::BadParameter, "eps must be in (0, 1)");
  auto keys = checked_edge_set(n, edges, "graph");
  auto mate_m = checked_mates(n, m, keys, "matching");
  for (const auto& [u, v] : edges)
    if (mate_m[u] == kNoNode && mate_m[v] == kNoNode)
      fail(ErrorCode::BadInput, "matching is not maximal");

  auto mstar = max_matching(n, edges);
  std::vector<NodeId> mate_s(n, kNoNode);
  for (const auto& [u, v] : mstar) {
    mate_s[u] = v;
    mate_s[v] = u;
  }

  ThreeAugmentable out;
  out.mu = mstar.size();
  out.matching_size = m.size();
  out.count = short_augmenting_paths(n, mate_m, mate_s).size();
  out.half_approx = static_cast<double>(out.matching_size) <=
                    (0.5 + eps) * static_cast<double>(out.mu) + 1e-9;
  out.bound_ok = !out.half_approx ||
                 static_cast<double>(out.count) + 1e-9 >=
                     (0.5 - 3.0 * eps) * static_cast<double>(out.mu);
  return out;
}

HighCoverage high_node_coverage(const KernelSnapshot& k, std::uint32_t index) {
  k.validate();
  ThresholdSubgraphs ts(k.n, k.params);
  check_index(index, ts.family_count());
  const auto t = thresholds_at(ts, index);
  auto dk = k.kernel_degrees();

  std::vector<std::uint8_t> high(k.n, 0);
  HighCoverage out;
  out.index = index;
  for (NodeId v = 0; v < k.n; ++v)
    if (dk[v] >= t.high) {
      high[v] = 1;
      ++out.high_nodes;
    }

  MaxMatching mm(k.n);
  for (const auto& [u, v] : k.kernel) mm.insert_edge(u, v);
  mm.resolve();
  out.covered = mm.maximize_coverage(high);
  out.mu_kernel = mm.size();
  out.uncovered = out.high_nodes - out.covered;
  out.reported_bound = 7.0 * k.params.s * static_cast<double>(out.mu_kernel);
  return out;
}

}  // namespace dynmatch
