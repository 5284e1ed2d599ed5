#include "dynmatch/bipartite_matcher.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace dynmatch {

void BipartiteParams::validate() const {
  if (!(eps > 0.0) || !(eps < 1.0 / 6.0))
    fail(ErrorCode::BadParameter,
         "bipartite accuracy parameter must lie strictly between 0 and 1/6");
}

BipartiteMatcher::BipartiteMatcher(NodeId n, BipartiteParams params)
    : n_(n), params_(params), limiter_(n, {params.eps}) {
  params_.validate();
  as_low_.assign(n_, 0);
  as_high_.assign(n_, 0);
}

void BipartiteMatcher::check_node(NodeId v) const {
  if (v >= n_) fail(ErrorCode::BadParameter, "node id out of range");
}

bool BipartiteMatcher::has_edge(NodeId u, NodeId v) const {
  return edges_.count(edge_key(u, v)) != 0;
}

int BipartiteMatcher::side_of(NodeId v) const {
  check_node(v);
  if (as_low_[v] > 0) return 1;
  if (as_high_[v] > 0) return 2;
  return 0;
}

Matching BipartiteMatcher::inner_matching() const {
  Matching m;
  m.reserve(inner_size_);
  for (auto [u, w] : inner_mate_)
    if (u < w) m.emplace_back(u, w);
  return m;
}

void BipartiteMatcher::insert_edge_raw(NodeId lo, NodeId hi) {
  edges_[edge_key(lo, hi)] = {lo, hi};
  ++as_low_[lo];
  ++as_high_[hi];
  ops_.tick();
}

void BipartiteMatcher::remove_edge_raw(NodeId u, NodeId v) {
  auto it = edges_.find(edge_key(u, v));
  auto [lo, hi] = it->second;
  edges_.erase(it);
  --as_low_[lo];
  --as_high_[hi];
  drop_inner(lo, hi);
  ops_.tick();
}

void BipartiteMatcher::drop_inner(NodeId u, NodeId v) {
  auto it = inner_mate_.find(u);
  if (it == inner_mate_.end() || it->second != v) return;
  inner_mate_.erase(it);
  inner_mate_.erase(v);
  --inner_size_;
  ops_.tick();
}

void BipartiteMatcher::rebuild() {
  // Recompute a maximal matching of the current edge set with no augmenting
  // path of length <= 3: greedy pass, then repair sweeps until a fixpoint.
  std::vector<std::pair<NodeId, NodeId>> es;
  es.reserve(edges_.size());
  for (const auto& [key, lh] : edges_) es.push_back(lh);
  std::sort(es.begin(), es.end());

  std::unordered_map<NodeId, std::vector<NodeId>> adj;
  std::vector<NodeId> lows;
  for (auto [lo, hi] : es) {
    auto& a = adj[lo];
    if (a.empty()) lows.push_back(lo);
    a.push_back(hi);
  }

  std::unordered_map<NodeId, NodeId> m;
  std::size_t sz = 0;
  auto mate_of = [&](NodeId v) -> NodeId {
    auto it = m.find(v);
    return it == m.end() ? kNoNode : it->second;
  };
  for (auto [lo, hi] : es) {
    ops_.tick();
    if (!m.count(lo) && !m.count(hi)) {
      m[lo] = hi;
      m[hi] = lo;
      ++sz;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId u : lows) {
      if (m.count(u)) continue;
      const auto& au = adj[u];
      bool done = false;
      for (NodeId w : au) {
        ops_.tick();
        if (!m.count(w)) {
          m[u] = w;
          m[w] = u;
          ++sz;
          done = changed = true;
          break;
        }
      }
      if (done) continue;
      // Length-3 repair: free u - (u,w) - w - matched - x - (x,y) - free y.
      for (NodeId w : au) {
        NodeId x = mate_of(w);
        for (NodeId y : adj[x]) {
          ops_.tick();
          if (y != w && !m.count(y)) {
            m[x] = y;
            m[y] = x;
            m[u] = w;
            m[w] = u;
            ++sz;
            done = changed = true;
            break;
          }
        }
        if (done) break;
      }
    }
  }
  inner_mate_ = std::move(m);
  inner_size_ = sz;
  phase_len_ = static_cast<std::size_t>(std::floor(
                   params_.eps / 9.0 * static_cast<double>(sz) + 1e-9)) +
               1;
  phase_pos_ = 0;
}

void BipartiteMatcher::phase_step() {
  if (phase_pos_ >= phase_len_) rebuild();
  ++phase_pos_;
}

const std::vector<EdgeChange>& BipartiteMatcher::finish_update() {
  phase_step();
  const auto& out =
      limiter_.apply(inner_matching(), deleted_batch_, inserted_batch_);
  deleted_batch_.clear();
  inserted_batch_.clear();
  return out;
}

const std::vector<EdgeChange>& BipartiteMatcher::insert(NodeId lo, NodeId hi) {
  check_node(lo);
  check_node(hi);
  if (lo == hi) fail(ErrorCode::SelfLoop, "self-loops are not allowed");
  if (edges_.count(edge_key(lo, hi)))
    fail(ErrorCode::DuplicateEdge, "edge already present");
  if (as_high_[lo] > 0)
    fail(ErrorCode::BadInput, "low endpoint already lives on the high side");
  if (as_low_[hi] > 0)
    fail(ErrorCode::BadInput, "high endpoint already lives on the low side");
  insert_edge_raw(lo, hi);
  inserted_batch_.emplace_back(lo, hi);
  return finish_update();
}

const std::vector<EdgeChange>& BipartiteMatcher::remove(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (!edges_.count(edge_key(u, v)))
    fail(ErrorCode::MissingEdge, "edge not present");
  remove_edge_raw(u, v);
  deleted_batch_.emplace_back(u, v);
  return finish_update();
}

const std::vector<EdgeChange>& BipartiteMatcher::apply_star(
    const StarUpdate& star, bool center_high) {
  check_node(star.center);
  // Validate the whole star against the pre-update state, then mutate.
  std::unordered_set<std::uint64_t> in_star;
  for (NodeId leaf : star.leaves) {
    check_node(leaf);
    if (leaf == star.center)
      fail(ErrorCode::SelfLoop, "star leaf equals its center");
    std::uint64_t key = edge_key(star.center, leaf);
    if (!in_star.insert(key).second)
      fail(ErrorCode::DuplicateEdge, "star lists the same leaf twice");
    if (star.kind == EventKind::Insert) {
      if (edges_.count(key))
        fail(ErrorCode::DuplicateEdge, "star inserts an existing edge");
      if (center_high) {
        if (as_low_[star.center] > 0)
          fail(ErrorCode::BadInput, "star center already lives on the low side");
        if (as_high_[leaf] > 0)
          fail(ErrorCode::BadInput, "star leaf already lives on the high side");
      } else {
        if (as_high_[star.center] > 0)
          fail(ErrorCode::BadInput, "star center already lives on the high side");
        if (as_low_[leaf] > 0)
          fail(ErrorCode::BadInput, "star leaf already lives on the low side");
      }
    } else {
      auto it = edges_.find(key);
      if (it == edges_.end())
        fail(ErrorCode::MissingEdge, "star deletes a missing edge");
      NodeId want_hi = center_high ? star.center : leaf;
      if (it->second.second != want_hi)
        fail(ErrorCode::BadInput, "star orientation disagrees with the edge");
    }
  }
  for (NodeId leaf : star.leaves) {
    if (star.kind == EventKind::Insert) {
      NodeId lo = center_high ? leaf : star.center;
      NodeId hi = center_high ? star.center : leaf;
      insert_edge_raw(lo, hi);
      inserted_batch_.emplace_back(lo, hi);
    } else {
      remove_edge_raw(star.center, leaf);
      deleted_batch_.emplace_back(star.center, leaf);
    }
  }
  return finish_update();
}

}  // namespace dynmatch
