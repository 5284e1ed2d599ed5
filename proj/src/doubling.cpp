#include "dynmatch/doubling.hpp"

#include <algorithm>

namespace dynmatch {

void DoublingParams::validate() const {
  BipartiteParams bp{inner_eps};
  bp.validate();
}

DoublingMatcher::DoublingMatcher(NodeId n, DoublingParams params)
    : n_(n), params_(params), inner_(2 * n, BipartiteParams{params.inner_eps}) {
  params_.validate();
  adj_.assign(n_, {kNoNode, kNoNode});
  mate_.assign(n_, kNoNode);
}

void DoublingMatcher::check_node(NodeId v) const {
  if (v >= n_) fail(ErrorCode::BadParameter, "node id out of range");
}

NodeId DoublingMatcher::mate(NodeId v) const {
  check_node(v);
  return mate_[v];
}

Matching DoublingMatcher::matching() const {
  Matching m;
  m.reserve(size_);
  for (NodeId v = 0; v < n_; ++v)
    if (mate_[v] != kNoNode && v < mate_[v]) m.emplace_back(v, mate_[v]);
  return m;
}

int DoublingMatcher::x_half_units(NodeId u, NodeId v) const {
  auto it = x_.find(edge_key(u, v));
  return it == x_.end() ? 0 : it->second;
}

std::vector<std::pair<std::pair<NodeId, NodeId>, int>> DoublingMatcher::support()
    const {
  std::vector<std::pair<std::pair<NodeId, NodeId>, int>> out;
  out.reserve(x_.size());
  for (const auto& [key, half] : x_)
    out.push_back({{static_cast<NodeId>(key >> 32),
                    static_cast<NodeId>(key & 0xffffffffULL)},
                   half});
  std::sort(out.begin(), out.end());
  return out;
}

void DoublingMatcher::record(EventKind kind, NodeId u, NodeId v) {
  changes_.push_back({seq_++, kind, std::min(u, v), std::max(u, v)});
}

void DoublingMatcher::add_support(NodeId u, NodeId v) {
  for (NodeId x : {u, v}) {
    NodeId other = x == u ? v : u;
    auto& slots = adj_[x];
    if (slots[0] == kNoNode)
      slots[0] = other;
    else
      slots[1] = other;  // degree bound 2 guarantees a free slot
  }
  ops_.tick();
}

void DoublingMatcher::drop_support(NodeId u, NodeId v) {
  for (NodeId x : {u, v}) {
    NodeId other = x == u ? v : u;
    auto& slots = adj_[x];
    if (slots[0] == other) {
      slots[0] = slots[1];
      slots[1] = kNoNode;
    } else {
      slots[1] = kNoNode;
    }
  }
  // A matched support edge that disappears is dropped from the output at
  // once, so stale cross-component pairs never survive into rematching.
  if (mate_[u] == v) {
    mate_[u] = kNoNode;
    mate_[v] = kNoNode;
    --size_;
    record(EventKind::Delete, u, v);
  }
  ops_.tick();
}

void DoublingMatcher::absorb_inner_changes(const std::vector<EdgeChange>& cs,
                                           std::vector<NodeId>& touched) {
  for (const auto& c : cs) {
    // One endpoint is a low copy (< n), the other a high copy (>= n).
    NodeId lo = c.u < n_ ? c.u : c.v;
    NodeId hi = c.u < n_ ? c.v : c.u;
    NodeId a = lo, b = hi - n_;
    std::uint64_t key = edge_key(a, b);
    if (c.kind == EventKind::Insert) {
      std::uint8_t& half = x_[key];
      ++half;
      if (half == 1) {
        add_support(a, b);
        touched.push_back(a);
        touched.push_back(b);
      }
    } else {
      auto it = x_.find(key);
      if (--it->second == 0) {
        x_.erase(it);
        drop_support(a, b);
        touched.push_back(a);
        touched.push_back(b);
      }
    }
    ops_.tick();
  }
}

void DoublingMatcher::rematch_components(std::vector<NodeId>& touched) {
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::unordered_set<NodeId> visited;

  for (NodeId start : touched) {
    if (visited.count(start)) continue;
    // Collect the path/cycle component containing `start`.
    std::vector<NodeId> comp{start};
    visited.insert(start);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (NodeId w : adj_[comp[i]]) {
        if (w != kNoNode && visited.insert(w).second) comp.push_back(w);
        ops_.tick();
      }
    }
    auto deg = [&](NodeId v) {
      return (adj_[v][0] != kNoNode ? 1 : 0) + (adj_[v][1] != kNoNode ? 1 : 0);
    };

    // Walk the component into an edge sequence.
    NodeId walk_start = kNoNode;
    bool is_cycle = true;
    NodeId smallest = comp[0];
    for (NodeId v : comp) {
      smallest = std::min(smallest, v);
      if (deg(v) == 1 && (walk_start == kNoNode || v < walk_start)) {
        walk_start = v;
        is_cycle = false;
      }
    }
    std::vector<std::pair<NodeId, NodeId>> seq;
    if (is_cycle && deg(smallest) == 2) {
      // Leave the smallest node via its smaller neighbor and walk around.
      NodeId first = smallest;
      NodeId prev = first;
      NodeId at = std::min(adj_[first][0], adj_[first][1]);
      seq.emplace_back(first, at);
      while (at != first) {
        NodeId nxt = kNoNode;
        for (NodeId w : adj_[at])
          if (w != kNoNode && w != prev) nxt = w;
        seq.emplace_back(at, nxt);
        ops_.tick();
        prev = at;
        at = nxt;
      }
    } else if (!is_cycle) {
      NodeId prev = kNoNode, at = walk_start;
      while (true) {
        NodeId nxt = kNoNode;
        for (NodeId w : adj_[at])
          if (w != kNoNode && w != prev) nxt = w;
        if (nxt == kNoNode) break;  // reached the other endpoint
        seq.emplace_back(at, nxt);
        ops_.tick();
        prev = at;
        at = nxt;
      }
    }  // else: isolated node, nothing to match

    // Choose alternating edges: paths and even cycles take positions
    // 0, 2, ...; odd cycles skip the first edge (it touches the smallest
    // node) and take 1, 3, ...
    std::vector<std::pair<NodeId, NodeId>> fresh;
    std::size_t begin = is_cycle && seq.size() % 2 == 1 ? 1 : 0;
    for (std::size_t i = begin; i < seq.size(); i += 2) {
      auto [a, b] = seq[i];
      fresh.emplace_back(std::min(a, b), std::max(a, b));
    }

    std::vector<std::pair<NodeId, NodeId>> old;
    for (NodeId v : comp)
      if (mate_[v] != kNoNode && v < mate_[v]) old.emplace_back(v, mate_[v]);
    std::sort(old.begin(), old.end());
    std::sort(fresh.begin(), fresh.end());

    for (auto e : old)
      if (!std::binary_search(fresh.begin(), fresh.end(), e)) {
        mate_[e.first] = kNoNode;
        mate_[e.second] = kNoNode;
        --size_;
        record(EventKind::Delete, e.first, e.second);
      }
    for (auto e : fresh)
      if (!std::binary_search(old.begin(), old.end(), e)) {
        mate_[e.first] = e.second;
        mate_[e.second] = e.first;
        ++size_;
        record(EventKind::Insert, e.first, e.second);
      }
  }
}

const std::vector<EdgeChange>& DoublingMatcher::insert(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) fail(ErrorCode::SelfLoop, "self-loops are not allowed");
  if (!edges_.insert(edge_key(u, v)).second)
    fail(ErrorCode::DuplicateEdge, "edge already present");
  changes_.clear();
  std::vector<NodeId> touched;
  absorb_inner_changes(inner_.insert(u, v + n_), touched);
  absorb_inner_changes(inner_.insert(v, u + n_), touched);
  rematch_components(touched);
  return changes_;
}

const std::vector<EdgeChange>& DoublingMatcher::remove(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  auto it = edges_.find(edge_key(u, v));
  if (it == edges_.end()) fail(ErrorCode::MissingEdge, "edge not present");
  edges_.erase(it);
  changes_.clear();
  std::vector<NodeId> touched;
  absorb_inner_changes(inner_.remove(u, v + n_), touched);
  absorb_inner_changes(inner_.remove(v, u + n_), touched);
  rematch_components(touched);
  return changes_;
}

}  // namespace dynmatch
