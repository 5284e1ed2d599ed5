#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "dynmatch/common.hpp"

namespace dynmatch {

// Edge orientation with a worst-case out-degree bound of O(sqrt(m)).
//
// Every edge is directed from one endpoint (its tail). New edges are oriented
// from the endpoint with smaller out-degree (ties: smaller id). Whenever a
// node's out-degree exceeds theta = 2*ceil(sqrt(2*mhat)), one of its out-edges
// whose head has out-degree < ceil(sqrt(2*mhat)) is flipped (such a head exists
// by counting). mhat is a factor-2 scale estimate of the live edge count m;
// when m leaves [mhat/2, 2*mhat], mhat is reset to m. Scale shrinks enqueue the
// now-overfull nodes and the queue is drained on every subsequent update
// (insert or delete) within a probe budget of ~sqrt(2*mhat) steps, keeping
// per-update work O(sqrt(m)) worst case. The maintained bound
// max_v dout(v) <= c*sqrt(2m)+2 (c = 3) is measured, not assumed, by the
// tests.
class Orientation {
 public:
  struct Flip {
    NodeId u, v;       // the edge
    NodeId new_tail;   // tail after the flip
  };

  struct InsertResult {
    NodeId tail;              // orientation chosen on arrival, before flips
    std::vector<Flip> flips;  // flips performed during this update, in order
  };

  explicit Orientation(NodeId n);

  InsertResult insert(NodeId u, NodeId v);
  // Returns flips performed while draining the catch-up queue on this update.
  const std::vector<Flip>& remove(NodeId u, NodeId v);

  NodeId tail_of(NodeId u, NodeId v) const;
  NodeId out_degree(NodeId v) const { return dout_[v]; }
  NodeId max_out_degree() const;
  const std::vector<NodeId>& out_neighbors(NodeId v) const { return out_[v]; }

  std::size_t edge_count() const { return m_; }
  std::size_t scale() const { return mhat_; }        // mhat
  std::uint64_t scale_epoch() const { return epoch_; }  // bumped on rescale
  std::uint64_t total_flips() const { return flips_total_; }
  std::size_t catchup_pending() const { return catchup_.size(); }

  OpCounter& ops() { return ops_; }
  const OpCounter& ops() const { return ops_; }

 private:
  std::size_t theta() const;       // flip threshold 2*ceil(sqrt(2*mhat))
  std::size_t head_limit() const;  // small-head bound ceil(sqrt(2*mhat))
  void set_tail(NodeId tail, NodeId head);
  void erase_dir(NodeId u, NodeId v, NodeId tail);
  void bucket_move(NodeId v, NodeId from, NodeId to);
  // Flips one of v's out-edges toward a small-out-degree head, spending at
  // most `budget` probe steps (decremented in place).
  bool flip_one(NodeId v, std::vector<Flip>& out, std::size_t& budget);
  void maybe_rescale();
  void run_catchup(std::vector<Flip>& out);

  NodeId n_;
  std::size_t m_ = 0;
  std::size_t mhat_ = 4;
  std::uint64_t epoch_ = 0;
  std::vector<std::vector<NodeId>> out_;            // out-adjacency per node
  std::unordered_map<std::uint64_t, NodeId> tail_;  // edge key -> tail
  // position of head w inside out_[tail]: key = directed edge key
  std::unordered_map<std::uint64_t, std::uint32_t> pos_;
  std::vector<NodeId> dout_;
  std::vector<std::uint32_t> scan_at_;  // rotating scan index for flip_one
  // nodes bucketed by exact out-degree, for cheap overfull collection
  std::vector<std::vector<NodeId>> buckets_;
  std::vector<std::uint32_t> bucket_pos_;
  std::deque<NodeId> catchup_;
  std::vector<std::uint8_t> queued_;
  std::vector<Flip> last_flips_;
  std::uint64_t flips_total_ = 0;
  OpCounter ops_;
};

}  // namespace dynmatch
