#pragma once

#include <unordered_map>
#include <vector>

#include "dynmatch/common.hpp"

namespace dynmatch {

// Dynamic undirected graph on a fixed node set [0, n). Each node owns a cyclic
// doubly-linked ring of its neighbors plus two independent ring cursors:
//   Cursor::Scan    - used by replacement scans after deletions
//   Cursor::Refresh - used by approximate-degree refresh rounds
// Edge insert/delete are O(1); deleting an element a cursor points at advances
// that cursor to the ring successor. New neighbors are linked immediately
// before the scan cursor, so a full ring cycle visits them last.
class DynamicGraph {
 public:
  enum class Cursor : int { Scan = 0, Refresh = 1 };

  explicit DynamicGraph(NodeId n);

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  NodeId degree(NodeId v) const { check_node(v); return deg_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  void insert_edge(NodeId u, NodeId v);
  void delete_edge(NodeId u, NodeId v);

  // Moves the cursor one step along v's ring and returns the neighbor it now
  // addresses. Errors with EmptyNeighborhood if v has no neighbors.
  NodeId advance_cursor(NodeId v, Cursor c = Cursor::Scan);

  // Neighbor snapshot in ring order starting at the scan cursor.
  std::vector<NodeId> neighbors(NodeId v) const;

  template <typename Fn>
  void for_each_neighbor(NodeId v, Fn&& fn) const {
    check_node(v);
    std::uint32_t head = cursor_[0][v];
    if (head == kNil) return;
    std::uint32_t e = head;
    do {
      fn(slab_[e].neighbor);
      e = slab_[e].next;
    } while (e != head);
  }

  // Edges as (u,v) pairs with u < v, in insertion-map order.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  OpCounter& ops() { return ops_; }
  const OpCounter& ops() const { return ops_; }

 private:
  static constexpr std::uint32_t kNil = static_cast<std::uint32_t>(-1);

  struct RingNode {
    NodeId neighbor;
    std::uint32_t prev;
    std::uint32_t next;
  };

  void check_node(NodeId v) const {
    if (v >= n_) fail(ErrorCode::BadParameter, "node id out of range");
  }
  std::uint32_t alloc_node();
  void free_node(std::uint32_t idx);
  // Links `elem` into v's ring immediately before the scan cursor.
  void link_before_cursor(NodeId v, std::uint32_t elem);
  void unlink(NodeId v, std::uint32_t elem);

  NodeId n_;
  std::vector<RingNode> slab_;
  std::vector<std::uint32_t> free_list_;
  std::vector<NodeId> deg_;
  std::vector<std::uint32_t> cursor_[2];
  // edge key -> ring elements (element in min(u,v)'s ring, element in max's).
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> edges_;
  OpCounter ops_;
};

}  // namespace dynmatch
