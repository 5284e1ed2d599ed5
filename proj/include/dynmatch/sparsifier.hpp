#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "dynmatch/common.hpp"

namespace dynmatch {

struct SparsifierParams {
  double eps = 0.3;  // must lie in (0, 1)
  void validate() const;
};

// Degree-capping edge filter. Every node "selects" up to ceil(sqrt(mhat)/eps)
// of its incident edges, and the derived graph consists of the edges selected
// by both endpoints, so its maximum degree never exceeds the capacity.
//
// mhat is the high-water live-edge count (floored at 4), so the capacity only
// ever grows. Insertions select the new edge iff the endpoint is below
// capacity; deleting a selected edge promotes that endpoint's most recently
// inserted unselected edge, if any. A node whose degree is at most the
// capacity therefore selects all of its edges.
//
// Steady-state updates cause at most 3 derived events (one removal plus up to
// two promotions). When an insertion raises the capacity, nodes holding
// unselected edges promote enough of them to keep the full-selection rule;
// that burst is charged to the update that grew mhat and is the one place the
// per-update event count can exceed 3.
class Sparsifier {
 public:
  Sparsifier(NodeId n, SparsifierParams params);

  const std::vector<UpdateEvent>& insert(NodeId u, NodeId v);
  const std::vector<UpdateEvent>& remove(NodeId u, NodeId v);

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return m_; }
  std::size_t derived_edge_count() const { return derived_m_; }
  bool has_edge(NodeId u, NodeId v) const;
  bool derived_has_edge(NodeId u, NodeId v) const;
  std::vector<std::pair<NodeId, NodeId>> derived_edges() const;  // sorted

  std::uint32_t capacity() const { return cap_; }
  std::size_t mhat() const { return mhat_; }
  std::uint32_t degree(NodeId v) const;
  std::uint32_t selected_count(NodeId v) const;
  std::uint64_t ops() const { return ops_.total; }
  const SparsifierParams& params() const { return params_; }

 private:
  // (insertion stamp, other endpoint); later stamp = more recent.
  using Entry = std::pair<std::uint64_t, NodeId>;

  void check_node(NodeId v) const;
  void select(NodeId v, Entry e);
  void unselect_store(NodeId v, Entry e);
  void promote_one(NodeId v);
  void refresh_capacity();

  NodeId n_;
  SparsifierParams params_;
  std::uint64_t stamp_ = 0;
  std::size_t m_ = 0, mhat_ = 4, derived_m_ = 0;
  std::uint32_t cap_ = 0;
  std::vector<std::set<Entry>> sel_, unsel_;
  std::unordered_map<std::uint64_t, std::uint64_t> edge_stamp_;
  // bit 0: selected at the smaller endpoint, bit 1: at the larger one.
  std::unordered_map<std::uint64_t, std::uint8_t> sel_mask_;
  std::set<NodeId> deficit_;  // nodes currently holding unselected edges
  std::vector<UpdateEvent> events_;
  OpCounter ops_;
};

}  // namespace dynmatch
