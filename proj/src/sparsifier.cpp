#include "dynmatch/sparsifier.hpp"

#include <algorithm>
#include <cmath>

namespace dynmatch {

void SparsifierParams::validate() const {
  if (!(eps > 0.0) || !(eps < 1.0))
    fail(ErrorCode::BadParameter,
         "sparsifier accuracy parameter must lie strictly between 0 and 1");
}

Sparsifier::Sparsifier(NodeId n, SparsifierParams params)
    : n_(n), params_(params) {
  params_.validate();
  sel_.resize(n_);
  unsel_.resize(n_);
  refresh_capacity();
}

void Sparsifier::check_node(NodeId v) const {
  if (v >= n_) fail(ErrorCode::BadParameter, "node id out of range");
}

bool Sparsifier::has_edge(NodeId u, NodeId v) const {
  return edge_stamp_.count(edge_key(u, v)) != 0;
}

bool Sparsifier::derived_has_edge(NodeId u, NodeId v) const {
  auto it = sel_mask_.find(edge_key(u, v));
  return it != sel_mask_.end() && it->second == 3;
}

std::vector<std::pair<NodeId, NodeId>> Sparsifier::derived_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(derived_m_);
  for (const auto& [key, mask] : sel_mask_)
    if (mask == 3)
      out.emplace_back(static_cast<NodeId>(key >> 32),
                       static_cast<NodeId>(key & 0xffffffffULL));
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t Sparsifier::degree(NodeId v) const {
  check_node(v);
  return static_cast<std::uint32_t>(sel_[v].size() + unsel_[v].size());
}

std::uint32_t Sparsifier::selected_count(NodeId v) const {
  check_node(v);
  return static_cast<std::uint32_t>(sel_[v].size());
}

void Sparsifier::select(NodeId v, Entry e) {
  sel_[v].insert(e);
  NodeId w = e.second;
  std::uint8_t bit = v < w ? 1 : 2;
  std::uint8_t& mask = sel_mask_[edge_key(v, w)];
  mask |= bit;
  ops_.tick();
  if (mask == 3) {
    ++derived_m_;
    events_.push_back({EventKind::Insert, std::min(v, w), std::max(v, w)});
  }
}

void Sparsifier::unselect_store(NodeId v, Entry e) {
  unsel_[v].insert(e);
  deficit_.insert(v);
  ops_.tick();
}

void Sparsifier::promote_one(NodeId v) {
  auto it = std::prev(unsel_[v].end());  // most recently inserted first
  Entry e = *it;
  unsel_[v].erase(it);
  if (unsel_[v].empty()) deficit_.erase(v);
  select(v, e);
}

void Sparsifier::refresh_capacity() {
  auto want = static_cast<std::uint32_t>(std::ceil(
      std::sqrt(static_cast<double>(mhat_)) / params_.eps - 1e-9));
  if (want <= cap_) return;
  cap_ = want;
  std::vector<NodeId> nodes(deficit_.begin(), deficit_.end());
  for (NodeId v : nodes)
    while (sel_[v].size() < cap_ && !unsel_[v].empty()) promote_one(v);
}

const std::vector<UpdateEvent>& Sparsifier::insert(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) fail(ErrorCode::SelfLoop, "self-loops are not allowed");
  std::uint64_t key = edge_key(u, v);
  if (edge_stamp_.count(key)) fail(ErrorCode::DuplicateEdge, "edge already present");

  events_.clear();
  std::uint64_t st = ++stamp_;
  edge_stamp_[key] = st;
  ++m_;
  ops_.tick();
  for (NodeId x : {u, v}) {
    NodeId other = x == u ? v : u;
    if (sel_[x].size() < cap_)
      select(x, {st, other});
    else
      unselect_store(x, {st, other});
  }
  if (m_ > mhat_) {
    mhat_ = m_;
    refresh_capacity();
  }
  return events_;
}

const std::vector<UpdateEvent>& Sparsifier::remove(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  std::uint64_t key = edge_key(u, v);
  auto sit = edge_stamp_.find(key);
  if (sit == edge_stamp_.end()) fail(ErrorCode::MissingEdge, "edge not present");
  std::uint64_t st = sit->second;

  events_.clear();
  auto mit = sel_mask_.find(key);
  std::uint8_t mask = mit == sel_mask_.end() ? 0 : mit->second;
  if (mask == 3) {
    --derived_m_;
    events_.push_back({EventKind::Delete, std::min(u, v), std::max(u, v)});
  }
  NodeId a = std::min(u, v), b = std::max(u, v);
  bool promote_a = false, promote_b = false;
  if (mask & 1) {
    sel_[a].erase({st, b});
    promote_a = true;
  } else {
    unsel_[a].erase({st, b});
    if (unsel_[a].empty()) deficit_.erase(a);
  }
  if (mask & 2) {
    sel_[b].erase({st, a});
    promote_b = true;
  } else {
    unsel_[b].erase({st, a});
    if (unsel_[b].empty()) deficit_.erase(b);
  }
  if (mit != sel_mask_.end()) sel_mask_.erase(mit);
  edge_stamp_.erase(sit);
  --m_;
  ops_.tick();
  if (promote_a && !unsel_[a].empty()) promote_one(a);
  if (promote_b && !unsel_[b].empty()) promote_one(b);
  return events_;
}

}  // namespace dynmatch
