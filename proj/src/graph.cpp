#include "dynmatch/graph.hpp"

namespace dynmatch {

DynamicGraph::DynamicGraph(NodeId n) : n_(n), deg_(n, 0) {
  cursor_[0].assign(n, kNil);
  cursor_[1].assign(n, kNil);
}

bool DynamicGraph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  if (u == v) return false;
  return edges_.count(edge_key(u, v)) != 0;
}

std::uint32_t DynamicGraph::alloc_node() {
  if (!free_list_.empty()) {
    std::uint32_t idx = free_list_.back();
    free_list_.pop_back();
    return idx;
  }
  slab_.push_back({});
  return static_cast<std::uint32_t>(slab_.size() - 1);
}

void DynamicGraph::free_node(std::uint32_t idx) { free_list_.push_back(idx); }

void DynamicGraph::link_before_cursor(NodeId v, std::uint32_t elem) {
  ops_.tick();
  std::uint32_t cur = cursor_[0][v];
  if (cur == kNil) {
    slab_[elem].prev = elem;
    slab_[elem].next = elem;
    cursor_[0][v] = elem;
    cursor_[1][v] = elem;
    return;
  }
  std::uint32_t before = slab_[cur].prev;
  slab_[before].next = elem;
  slab_[elem].prev = before;
  slab_[elem].next = cur;
  slab_[cur].prev = elem;
}

void DynamicGraph::unlink(NodeId v, std::uint32_t elem) {
  ops_.tick();
  std::uint32_t nxt = slab_[elem].next;
  if (nxt == elem) {
    cursor_[0][v] = kNil;
    cursor_[1][v] = kNil;
  } else {
    std::uint32_t prv = slab_[elem].prev;
    slab_[prv].next = nxt;
    slab_[nxt].prev = prv;
    for (auto& cur : cursor_) {
      if (cur[v] == elem) cur[v] = nxt;
    }
  }
}

void DynamicGraph::insert_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) fail(ErrorCode::SelfLoop, "self-loops are not allowed");
  std::uint64_t key = edge_key(u, v);
  if (edges_.count(key)) fail(ErrorCode::DuplicateEdge, "edge already present");
  NodeId a = u < v ? u : v;
  NodeId b = u < v ? v : u;
  std::uint32_t ea = alloc_node();  // element in a's ring, holds b
  std::uint32_t eb = alloc_node();  // element in b's ring, holds a
  slab_[ea].neighbor = b;
  slab_[eb].neighbor = a;
  link_before_cursor(a, ea);
  link_before_cursor(b, eb);
  ++deg_[a];
  ++deg_[b];
  edges_.emplace(key, std::make_pair(ea, eb));
}

void DynamicGraph::delete_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  auto it = edges_.find(edge_key(u, v));
  if (u == v || it == edges_.end())
    fail(ErrorCode::MissingEdge, "edge not present");
  NodeId a = u < v ? u : v;
  NodeId b = u < v ? v : u;
  auto [ea, eb] = it->second;
  unlink(a, ea);
  unlink(b, eb);
  free_node(ea);
  free_node(eb);
  --deg_[a];
  --deg_[b];
  edges_.erase(it);
}

NodeId DynamicGraph::advance_cursor(NodeId v, Cursor c) {
  check_node(v);
  std::uint32_t& cur = cursor_[static_cast<int>(c)][v];
  if (cur == kNil)
    fail(ErrorCode::EmptyNeighborhood, "cannot advance cursor: no neighbors");
  ops_.tick();
  cur = slab_[cur].next;
  return slab_[cur].neighbor;
}

std::vector<NodeId> DynamicGraph::neighbors(NodeId v) const {
  check_node(v);
  std::vector<NodeId> out;
  out.reserve(deg_[v]);
  for_each_neighbor(v, [&](NodeId w) { out.push_back(w); });
  return out;
}

std::vector<std::pair<NodeId, NodeId>> DynamicGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edges_.size());
  for (const auto& [key, elems] : edges_) {
    (void)elems;
    out.emplace_back(static_cast<NodeId>(key >> 32),
                     static_cast<NodeId>(key & 0xffffffffu));
  }
  return out;
}

}  // namespace dynmatch
