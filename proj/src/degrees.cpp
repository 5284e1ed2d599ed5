#include "dynmatch/degrees.hpp"

#include <algorithm>
#include <cmath>

namespace dynmatch {

void DegreeParams::validate() const {
  if (!(alpha > 0.0))
    fail(ErrorCode::BadParameter, "degree accuracy must be positive");
  if (max_degree < 1)
    fail(ErrorCode::BadParameter, "degree cap must be at least 1");
}

DegreeTracker::DegreeTracker(NodeId n, DegreeParams params)
    : n_(n), params_(params), g_(n), dk_(n, 0) {
  params_.validate();
  quota_ = static_cast<std::uint32_t>(
      std::ceil(static_cast<double>(params_.max_degree) / params_.alpha - 1e-9));
  if (quota_ < 1) quota_ = 1;
}

void DegreeTracker::insert_edge(NodeId u, NodeId v) {
  if (u >= n_ || v >= n_) fail(ErrorCode::BadParameter, "node id out of range");
  if (g_.degree(u) >= params_.max_degree || g_.degree(v) >= params_.max_degree)
    fail(ErrorCode::DegreeBoundExceeded,
         "edge insertion would exceed the degree cap");
  g_.insert_edge(u, v);
  counters_[directed_key(u, v)] = dk_[v];
  counters_[directed_key(v, u)] = dk_[u];
  ops_.tick(2);
}

void DegreeTracker::delete_edge(NodeId u, NodeId v) {
  if (u >= n_ || v >= n_) fail(ErrorCode::BadParameter, "node id out of range");
  if (kernel_edges_.count(edge_key(u, v)))
    fail(ErrorCode::BadInput,
         "edge is still tracked; remove it from the subgraph first");
  g_.delete_edge(u, v);
  counters_.erase(directed_key(u, v));
  counters_.erase(directed_key(v, u));
  ops_.tick(2);
}

std::uint32_t DegreeTracker::kernel_degree(NodeId v) const {
  if (v >= n_) fail(ErrorCode::BadParameter, "node id out of range");
  return dk_[v];
}

bool DegreeTracker::kernel_has_edge(NodeId u, NodeId v) const {
  return kernel_edges_.count(edge_key(u, v)) != 0;
}

std::uint32_t DegreeTracker::counter(NodeId holder, NodeId subject) const {
  auto it = counters_.find(directed_key(holder, subject));
  if (it == counters_.end())
    fail(ErrorCode::BadInput, "no counter for a non-adjacent pair");
  return it->second;
}

void DegreeTracker::refresh_ring(NodeId subject,
                                 std::unordered_set<std::uint64_t>& seen) {
  NodeId deg = g_.degree(subject);
  if (deg == 0) return;
  // A full ring cycle refreshes every counter, so further advances would only
  // revisit; capping at the ring length keeps the cost proportional to the
  // actual neighborhood without weakening the staleness bound.
  std::uint32_t advances = std::min<std::uint32_t>(quota_, deg);
  for (std::uint32_t k = 0; k < advances; ++k) {
    NodeId holder = g_.advance_cursor(subject, DynamicGraph::Cursor::Refresh);
    counters_[directed_key(holder, subject)] = dk_[subject];
    if (seen.insert(directed_key(holder, subject)).second)
      writes_.emplace_back(holder, subject);
    ops_.tick();
  }
}

const std::vector<std::pair<NodeId, NodeId>>& DegreeTracker::apply_kernel_change(
    EventKind kind, NodeId u, NodeId v) {
  if (u >= n_ || v >= n_) fail(ErrorCode::BadParameter, "node id out of range");
  if (!g_.has_edge(u, v))
    fail(ErrorCode::BadInput, "tracked-subgraph change names a missing edge");
  std::uint64_t key = edge_key(u, v);
  if (kind == EventKind::Insert) {
    if (!kernel_edges_.insert(key).second)
      fail(ErrorCode::DuplicateEdge, "edge already tracked");
    ++dk_[u];
    ++dk_[v];
  } else {
    if (kernel_edges_.erase(key) == 0)
      fail(ErrorCode::MissingEdge, "edge not tracked");
    --dk_[u];
    --dk_[v];
  }
  writes_.clear();
  std::unordered_set<std::uint64_t> seen;
  refresh_ring(u, seen);
  refresh_ring(v, seen);
  return writes_;
}

void SubgraphParams::validate() const {
  if (!(eps > 0.0) || !(eps < 1.0))
    fail(ErrorCode::BadParameter, "family accuracy must lie in (0, 1)");
  if (!(s > 0.0) || !(s < 1.0))
    fail(ErrorCode::BadParameter, "low-side offset must lie in (0, 1)");
  if (d < 1) fail(ErrorCode::BadParameter, "degree scale must be at least 1");
  double fam = std::ceil(1.0 / eps - 1e-9);
  if (fam > 64.0)
    fail(ErrorCode::BadParameter,
         "accuracy implies more than 64 threshold families");
  if (eps > 2.0 * s + 1e-12)
    fail(ErrorCode::BadParameter,
         "containment requires the accuracy to be at most twice the offset");
  if (3.0 * s + 2.0 * fam * eps * eps >= 1.0)
    fail(ErrorCode::BadParameter,
         "threshold bands overlap; decrease the offset or the accuracy");
}

ThresholdSubgraphs::ThresholdSubgraphs(NodeId n, SubgraphParams params)
    : n_(n), params_(params) {
  params_.validate();
  families_ = static_cast<std::uint32_t>(std::ceil(1.0 / params_.eps - 1e-9));
  double d = static_cast<double>(params_.d);
  double e2 = params_.eps * params_.eps;
  for (std::uint32_t i = 1; i <= families_; ++i) {
    double band = static_cast<double>(i) * e2;
    h_lo_.push_back(static_cast<std::uint32_t>(
        std::max(0.0, std::ceil(d * (1.0 - 2.0 * params_.s - band) - 1e-9))));
    sh_lo_.push_back(static_cast<std::uint32_t>(
        std::max(0.0, std::ceil(d * (1.0 - params_.eps - band) - 1e-9))));
    lo_hi_.push_back(static_cast<std::uint32_t>(
        std::floor(d * (params_.s + band) + 1e-9)));
  }
  // The rounded thresholds must preserve both structural facts the families
  // rely on: a unique high/low orientation (low band strictly below each high
  // band) and SH contained in H.
  for (std::uint32_t k = 0; k < families_; ++k) {
    if (lo_hi_[k] >= h_lo_[k] || lo_hi_[k] >= sh_lo_[k])
      fail(ErrorCode::BadParameter,
           "rounded threshold bands overlap for some family index");
    if (sh_lo_[k] < h_lo_[k])
      fail(ErrorCode::BadParameter,
           "rounded thresholds break family containment");
  }
  count_h_.assign(families_, 0);
  count_sh_.assign(families_, 0);
}

void ThresholdSubgraphs::check_index(std::uint32_t index) const {
  if (index < 1 || index > families_)
    fail(ErrorCode::BadParameter, "family index out of range");
}

std::uint32_t ThresholdSubgraphs::high_floor(Family f, std::uint32_t index) const {
  check_index(index);
  return f == Family::H ? h_lo_[index - 1] : sh_lo_[index - 1];
}

std::uint32_t ThresholdSubgraphs::low_ceiling(std::uint32_t index) const {
  check_index(index);
  return lo_hi_[index - 1];
}

void ThresholdSubgraphs::StarCollector::add(Family family, std::uint32_t index,
                                            EventKind kind, NodeId center,
                                            bool center_high, NodeId leaf) {
  groups_[{index, static_cast<int>(family), kind == EventKind::Delete ? 0 : 1,
           center, center_high}]
      .push_back(leaf);
}

std::vector<SubgraphStar> ThresholdSubgraphs::StarCollector::emit() const {
  std::vector<SubgraphStar> out;
  out.reserve(groups_.size());
  for (const auto& [key, leaves] : groups_) {
    const auto& [index, family, kindbit, center, center_high] = key;
    SubgraphStar star;
    star.family = static_cast<Family>(family);
    star.index = index;
    star.center_high = center_high;
    star.star.kind = kindbit == 0 ? EventKind::Delete : EventKind::Insert;
    star.star.center = center;
    star.star.leaves = leaves;
    out.push_back(std::move(star));
  }
  return out;
}

void ThresholdSubgraphs::reevaluate(NodeId a, NodeId b, std::uint32_t c_ab,
                                    std::uint32_t c_ba, NodeId center,
                                    StarCollector& out) {
  std::uint64_t new_h = 0, new_sh = 0;
  NodeId new_lo = kNoNode, new_hi = kNoNode;
  for (std::uint32_t k = 0; k < families_; ++k) {
    std::uint64_t bit = std::uint64_t{1} << k;
    // b on the high side. The validated band gap makes the opposite
    // orientation unsatisfiable whenever one of these bits holds.
    if (c_ab >= h_lo_[k] && c_ba <= lo_hi_[k]) new_h |= bit;
    if (c_ab >= sh_lo_[k] && c_ba <= lo_hi_[k]) new_sh |= bit;
  }
  if (new_h | new_sh) {
    new_lo = a;
    new_hi = b;
  } else {
    for (std::uint32_t k = 0; k < families_; ++k) {
      std::uint64_t bit = std::uint64_t{1} << k;
      if (c_ba >= h_lo_[k] && c_ab <= lo_hi_[k]) new_h |= bit;
      if (c_ba >= sh_lo_[k] && c_ab <= lo_hi_[k]) new_sh |= bit;
    }
    if (new_h | new_sh) {
      new_lo = b;
      new_hi = a;
    }
  }
  ops_.tick(families_);

  std::uint64_t key = edge_key(a, b);
  auto it = mem_.find(key);
  Mem old;
  if (it != mem_.end()) old = it->second;

  auto flips = [&](Family fam, std::uint64_t old_mask, std::uint64_t new_mask,
                   std::vector<std::size_t>& counts) {
    std::uint64_t removed = old_mask & ~new_mask;
    std::uint64_t added = new_mask & ~old_mask;
    for (std::uint32_t k = 0; k < families_; ++k) {
      std::uint64_t bit = std::uint64_t{1} << k;
      NodeId leaf = (center == a) ? b : a;
      if (removed & bit) {
        out.add(fam, k + 1, EventKind::Delete, center, center == old.hi, leaf);
        --counts[k];
        ops_.tick();
      }
      if (added & bit) {
        out.add(fam, k + 1, EventKind::Insert, center, center == new_hi, leaf);
        ++counts[k];
        ops_.tick();
      }
    }
  };
  if (center == kNoNode) {
    // Attribute to the low endpoint of whichever orientation applies.
    center = (new_h | new_sh) ? new_lo : (old.lo != kNoNode ? old.lo : a);
  }
  flips(Family::SH, old.sh_mask, new_sh, count_sh_);
  flips(Family::H, old.h_mask, new_h, count_h_);

  if (new_h | new_sh) {
    mem_[key] = {new_h, new_sh, new_lo, new_hi};
  } else if (it != mem_.end()) {
    mem_.erase(it);
  }
}

void ThresholdSubgraphs::drop_edge(NodeId a, NodeId b, StarCollector& out) {
  std::uint64_t key = edge_key(a, b);
  auto it = mem_.find(key);
  if (it == mem_.end()) return;
  Mem old = it->second;
  for (std::uint32_t k = 0; k < families_; ++k) {
    std::uint64_t bit = std::uint64_t{1} << k;
    if (old.sh_mask & bit) {
      out.add(Family::SH, k + 1, EventKind::Delete, old.lo, false, old.hi);
      --count_sh_[k];
    }
    if (old.h_mask & bit) {
      out.add(Family::H, k + 1, EventKind::Delete, old.lo, false, old.hi);
      --count_h_[k];
    }
  }
  ops_.tick(families_);
  mem_.erase(it);
}

bool ThresholdSubgraphs::contains(Family f, std::uint32_t index, NodeId u,
                                  NodeId v) const {
  check_index(index);
  auto it = mem_.find(edge_key(u, v));
  if (it == mem_.end()) return false;
  std::uint64_t mask = f == Family::H ? it->second.h_mask : it->second.sh_mask;
  return (mask >> (index - 1)) & 1;
}

std::size_t ThresholdSubgraphs::edge_count(Family f, std::uint32_t index) const {
  check_index(index);
  return f == Family::H ? count_h_[index - 1] : count_sh_[index - 1];
}

std::vector<std::pair<NodeId, NodeId>> ThresholdSubgraphs::snapshot(
    Family f, std::uint32_t index) const {
  check_index(index);
  std::vector<std::pair<NodeId, NodeId>> out;
  std::uint64_t bit = std::uint64_t{1} << (index - 1);
  for (const auto& [key, mem] : mem_) {
    std::uint64_t mask = f == Family::H ? mem.h_mask : mem.sh_mask;
    if (mask & bit) out.emplace_back(mem.lo, mem.hi);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SubgraphStar> on_kernel_change(DegreeTracker& tracker,
                                           ThresholdSubgraphs& subgraphs,
                                           EventKind kind, NodeId u, NodeId v) {
  const auto& writes = tracker.apply_kernel_change(kind, u, v);
  ThresholdSubgraphs::StarCollector col;
  for (auto [holder, subject] : writes)
    subgraphs.reevaluate(holder, subject, tracker.counter(holder, subject),
                         tracker.counter(subject, holder), subject, col);
  return col.emit();
}

std::vector<SubgraphStar> on_graph_insert(DegreeTracker& tracker,
                                          ThresholdSubgraphs& subgraphs,
                                          NodeId u, NodeId v) {
  tracker.insert_edge(u, v);
  ThresholdSubgraphs::StarCollector col;
  subgraphs.reevaluate(u, v, tracker.counter(u, v), tracker.counter(v, u),
                       kNoNode, col);
  return col.emit();
}

std::vector<SubgraphStar> on_graph_delete(DegreeTracker& tracker,
                                          ThresholdSubgraphs& subgraphs,
                                          NodeId u, NodeId v) {
  tracker.delete_edge(u, v);
  ThresholdSubgraphs::StarCollector col;
  subgraphs.drop_edge(u, v, col);
  return col.emit();
}

}  // namespace dynmatch
