#include "dynmatch/blossom.hpp"

#include <algorithm>

namespace dynmatch {

MaxMatching::MaxMatching(NodeId n)
    : n_(n),
      adj_(n),
      mate_(n, kNoNode),
      p_(n, kNoNode),
      base_(n, 0),
      p_stamp_(n, 0),
      base_stamp_(n, 0),
      even_stamp_(n, 0),
      blossom_stamp_(n, 0),
      lca_mark_(n, 0),
      touch_stamp_(n, 0) {}

void MaxMatching::touch(NodeId v) {
  if (touch_stamp_[v] != touch_tm_) {
    touch_stamp_[v] = touch_tm_;
    touched_.push_back(v);
  }
}

void MaxMatching::insert_edge(NodeId u, NodeId v) {
  if (u >= n_ || v >= n_) fail(ErrorCode::BadParameter, "matching: node out of range");
  if (u == v) fail(ErrorCode::SelfLoop, "matching: self-loop");
  if (pos_.count(edge_key(u, v))) fail(ErrorCode::DuplicateEdge, "matching: duplicate edge");
  pos_[edge_key(u, v)] = {static_cast<std::uint32_t>(adj_[std::min(u, v)].size()),
                          static_cast<std::uint32_t>(adj_[std::max(u, v)].size())};
  touch(u);
  touch(v);
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  ops_ += 1;
  if (mate_[u] == kNoNode && mate_[v] == kNoNode) {
    mate_[u] = v;
    mate_[v] = u;
    ++size_;
  } else if (mate_[u] == kNoNode) {
    find_path(u);
  } else if (mate_[v] == kNoNode) {
    find_path(v);
  } else {
    // An augmenting path through the new edge may connect two distant free
    // nodes; probe every free node until one augments.
    full_pass();
  }
}

void MaxMatching::delete_edge(NodeId u, NodeId v) {
  auto it = pos_.find(edge_key(u, v));
  if (it == pos_.end()) fail(ErrorCode::MissingEdge, "matching: missing edge");
  NodeId a = std::min(u, v), b = std::max(u, v);
  auto [ia, ib] = it->second;
  pos_.erase(it);
  auto drop = [&](NodeId from, NodeId to, std::uint32_t idx) {
    auto& list = adj_[from];
    NodeId moved = list.back();
    list[idx] = moved;
    list.pop_back();
    if (moved != to) {
      auto& rec = pos_.at(edge_key(from, moved));
      if (from < moved)
        rec.first = idx;
      else
        rec.second = idx;
    }
  };
  drop(a, b, ia);
  drop(b, a, ib);
  ops_ += 1;
  if (mate_[u] == v) {
    mate_[u] = kNoNode;
    mate_[v] = kNoNode;
    --size_;
    // Any new augmenting path must end at one of the freed endpoints, and a
    // successful augment restores the old optimum, so a second search would
    // be fruitless.
    if (!find_path(u)) find_path(v);
  }
}

void MaxMatching::apply(const UpdateEvent& ev) {
  if (ev.kind == EventKind::Insert)
    insert_edge(ev.u, ev.v);
  else
    delete_edge(ev.u, ev.v);
}

void MaxMatching::resolve() {
  std::fill(mate_.begin(), mate_.end(), kNoNode);
  size_ = 0;
  // Greedy warm start, then augment to optimality.
  for (NodeId v = 0; v < n_; ++v) {
    if (mate_[v] != kNoNode) continue;
    for (NodeId w : adj_[v]) {
      if (mate_[w] == kNoNode) {
        mate_[v] = w;
        mate_[w] = v;
        ++size_;
        break;
      }
    }
  }
  full_pass();
  // full_pass stops after one augment; keep going until none succeeds.
  bool again = true;
  while (again) {
    again = false;
    for (NodeId v = 0; v < n_; ++v) {
      if (mate_[v] == kNoNode && !adj_[v].empty() && find_path(v)) {
        again = true;
      }
    }
  }
}

void MaxMatching::reset() {
  for (NodeId v : touched_) {
    adj_[v].clear();
    mate_[v] = kNoNode;
  }
  ops_ += touched_.size();
  touched_.clear();
  ++touch_tm_;
  pos_.clear();
  size_ = 0;
}

void MaxMatching::seed_pair(NodeId u, NodeId v) {
  if (u >= n_ || v >= n_ || u == v) fail(ErrorCode::BadParameter, "matching: bad seed pair");
  if (mate_[u] != kNoNode || mate_[v] != kNoNode)
    fail(ErrorCode::BadParameter, "matching: seed endpoint already matched");
  touch(u);
  touch(v);
  mate_[u] = v;
  mate_[v] = u;
  ++size_;
  ops_ += 1;
}

void MaxMatching::load_edge(NodeId u, NodeId v) {
  if (u >= n_ || v >= n_) fail(ErrorCode::BadParameter, "matching: node out of range");
  if (u == v) fail(ErrorCode::SelfLoop, "matching: self-loop");
  touch(u);
  touch(v);
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  ops_ += 1;
  if (mate_[u] == kNoNode && mate_[v] == kNoNode) {
    mate_[u] = v;
    mate_[v] = u;
    ++size_;
  }
}

bool MaxMatching::augment_from(NodeId root) {
  if (root >= n_) fail(ErrorCode::BadParameter, "matching: node out of range");
  if (mate_[root] != kNoNode || adj_[root].empty()) return false;
  return find_path(root);
}

std::vector<std::pair<NodeId, NodeId>> MaxMatching::matched_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(size_);
  for (NodeId v = 0; v < n_; ++v) {
    if (mate_[v] != kNoNode && v < mate_[v]) out.emplace_back(v, mate_[v]);
  }
  return out;
}

void MaxMatching::full_pass() {
  for (NodeId v = 0; v < n_; ++v) {
    if (mate_[v] == kNoNode && !adj_[v].empty() && find_path(v)) return;
  }
}

NodeId MaxMatching::lca(NodeId a, NodeId b) {
  ++lca_tm_;
  for (;;) {
    a = base_of(a);
    lca_mark_[a] = lca_tm_;
    if (mate_[a] == kNoNode) break;
    a = parent_of(mate_[a]);
  }
  for (;;) {
    b = base_of(b);
    if (lca_mark_[b] == lca_tm_) return b;
    b = parent_of(mate_[b]);
  }
}

void MaxMatching::mark_path(NodeId v, NodeId b, NodeId child) {
  while (base_of(v) != b) {
    set_in_blossom(base_of(v));
    set_in_blossom(base_of(mate_[v]));
    set_parent(v, child);
    child = mate_[v];
    v = parent_of(mate_[v]);
    ops_ += 1;
  }
}

bool MaxMatching::find_path(NodeId root, NodeId forbid) {
  ++search_tm_;
  ops_ += 1;
  set_even(root);
  q_.clear();
  q_.push_back(root);
  for (std::size_t head = 0; head < q_.size(); ++head) {
    NodeId v = q_[head];
    for (NodeId w : adj_[v]) {
      ops_ += 1;
      if (base_of(v) == base_of(w) || mate_[v] == w || w == forbid) continue;
      if (w == root || (mate_[w] != kNoNode && parent_of(mate_[w]) != kNoNode)) {
        // Even-even edge inside one tree: contract the odd cycle.
        NodeId cur = lca(v, w);
        ++blossom_tm_;
        mark_path(v, cur, w);
        mark_path(w, cur, v);
        for (NodeId i = 0; i < n_; ++i) {
          if (in_blossom_now(base_of(i))) {
            set_base(i, cur);
            if (!even_now(i)) {
              set_even(i);
              q_.push_back(i);
            }
          }
        }
        ops_ += n_;
      } else if (parent_of(w) == kNoNode) {
        set_parent(w, v);
        if (mate_[w] == kNoNode) {
          // Free node reached: flip matched/unmatched along the parent chain.
          NodeId a = w;
          while (a != kNoNode) {
            NodeId pa = parent_of(a);
            NodeId next = mate_[pa];
            mate_[a] = pa;
            mate_[pa] = a;
            a = next;
            ops_ += 1;
          }
          ++size_;
          return true;
        }
        set_even(mate_[w]);
        q_.push_back(mate_[w]);
      }
    }
  }
  return false;
}

std::size_t MaxMatching::maximize_coverage(const std::vector<std::uint8_t>& flagged) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId u = 0; u < n_; ++u) {
      if (!flagged[u] || mate_[u] != kNoNode || adj_[u].empty()) continue;
      if (find_path(u)) {  // matching was not maximum after all; keep the augment
        changed = true;
        continue;
      }
      // The failed search labelled every node reachable from u by an
      // even-length alternating path. A matched unflagged node x among them
      // can hand its coverage to u: detach x's matched edge and search again
      // with x barred as an endpoint, so a successful augment must terminate
      // at x's old mate (re-covering it) and only x ends up uncovered. If u
      // can join the covered set at all, one of these candidates works.
      std::vector<NodeId> cands;
      for (NodeId w : q_) {
        if (w != u && !flagged[w] && even_now(w) && mate_[w] != kNoNode) cands.push_back(w);
      }
      for (NodeId x : cands) {
        if (mate_[x] == kNoNode) continue;
        NodeId y = mate_[x];
        mate_[x] = kNoNode;
        mate_[y] = kNoNode;
        --size_;
        if (find_path(u, /*forbid=*/x)) {
          changed = true;
          break;
        }
        mate_[x] = y;
        mate_[y] = x;
        ++size_;
      }
    }
  }
  std::size_t covered_flagged = 0;
  for (NodeId v = 0; v < n_; ++v) {
    if (flagged[v] && mate_[v] != kNoNode) ++covered_flagged;
  }
  return covered_flagged;
}

std::size_t max_matching_size(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  return max_matching(n, edges).size();
}

std::vector<std::pair<NodeId, NodeId>> max_matching(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  MaxMatching mm(n);
  std::unordered_map<std::uint64_t, bool> seen;
  seen.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    if (!seen.emplace(edge_key(u, v), true).second) continue;
    mm.load_edge(u, v);
  }
  for (NodeId v = 0; v < n; ++v) mm.augment_from(v);
  return mm.matched_edges();
}

namespace {

std::size_t exhaustive_rec(std::vector<std::vector<NodeId>>& adj, std::vector<std::uint8_t>& used) {
  // Branch on one node of maximum remaining degree: either it stays single or
  // is matched to one of its neighbors.
  NodeId pick = kNoNode;
  std::size_t best_deg = 0;
  for (NodeId v = 0; v < adj.size(); ++v) {
    if (used[v]) continue;
    std::size_t d = 0;
    for (NodeId w : adj[v])
      if (!used[w]) ++d;
    if (d > best_deg) {
      best_deg = d;
      pick = v;
    }
  }
  if (pick == kNoNode) return 0;
  used[pick] = 1;
  std::size_t best = exhaustive_rec(adj, used);  // pick stays unmatched
  for (NodeId w : adj[pick]) {
    if (used[w]) continue;
    used[w] = 1;
    best = std::max(best, 1 + exhaustive_rec(adj, used));
    used[w] = 0;
  }
  used[pick] = 0;
  return best;
}

}  // namespace

std::size_t exhaustive_matching_size(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<std::uint8_t> used(n, 0);
  return exhaustive_rec(adj, used);
}

}  // namespace dynmatch
