#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/graph.hpp"
#include "dynmatch/orientation.hpp"

namespace dynmatch {

struct KernelParams {
  double eps = 0.1;
  std::uint32_t d = 10;

  // Structural requirements only. The approximation-quality bound additionally
  // needs d >= 1/eps; callers that claim that bound pass such parameters.
  void validate() const {
    if (!(eps > 0.0) || !(eps < 0.5)) fail(ErrorCode::BadParameter, "kernel: eps must be in (0, 1/2)");
    if (d < 1) fail(ErrorCode::BadParameter, "kernel: d must be positive");
  }

  // Smallest integer degree that counts as "high": a node at or above this
  // satisfies the cover condition for its incident non-kernel edges.
  std::uint32_t p2_threshold() const {
    return static_cast<std::uint32_t>(std::ceil(static_cast<double>(d) * (1.0 - eps) - 1e-9));
  }
};

struct KernelChange {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Insert;
  NodeId u = 0;
  NodeId v = 0;
};

// Read-only view shared by both kernel maintainers.
class KernelView {
 public:
  virtual ~KernelView() = default;
  virtual const DynamicGraph& graph() const = 0;
  virtual const KernelParams& params() const = 0;
  virtual bool in_kernel(NodeId u, NodeId v) const = 0;
  virtual std::uint32_t kernel_degree(NodeId v) const = 0;
  virtual std::vector<std::pair<NodeId, NodeId>> kernel_edges() const = 0;
  virtual std::size_t kernel_edge_count() const = 0;
};

struct KernelCheckReport {
  bool p1 = true;
  bool p2 = true;
  bool subset = true;
  bool degrees_consistent = true;
  NodeId witness_u = kNoNode;
  NodeId witness_v = kNoNode;
  bool ok() const { return p1 && p2 && subset && degrees_consistent; }
};

// Independent full recomputation of the two defining degree properties.
KernelCheckReport check_kernel(const KernelView& k);

namespace detail {

// Unordered edge set with O(1) insert/erase/contains and stable enumeration.
class EdgeSet {
 public:
  bool contains(NodeId u, NodeId v) const { return index_.count(edge_key(u, v)) != 0; }
  void insert(NodeId u, NodeId v);
  void erase(NodeId u, NodeId v);
  std::size_t size() const { return list_.size(); }
  const std::vector<std::pair<NodeId, NodeId>>& list() const { return list_; }

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::pair<NodeId, NodeId>> list_;
};

}  // namespace detail

// Kernel maintainer that repairs deletions by advancing a per-node cursor over
// the neighbor ring, up to ceil(n/(eps*d)) probes per endpoint.
class ScanKernel final : public KernelView {
 public:
  ScanKernel(NodeId n, KernelParams params);

  const std::vector<KernelChange>& insert(NodeId u, NodeId v);
  const std::vector<KernelChange>& remove(NodeId u, NodeId v);
  const std::vector<KernelChange>& apply(const UpdateEvent& ev);

  const DynamicGraph& graph() const override { return g_; }
  const KernelParams& params() const override { return params_; }
  bool in_kernel(NodeId u, NodeId v) const override { return set_.contains(u, v); }
  std::uint32_t kernel_degree(NodeId v) const override { return dk_[v]; }
  std::vector<std::pair<NodeId, NodeId>> kernel_edges() const override { return set_.list(); }
  std::size_t kernel_edge_count() const override { return set_.size(); }

  std::uint32_t scan_budget() const { return scan_budget_; }
  std::uint64_t ops() const { return ops_ + g_.ops().total; }

 private:
  void add_kernel_edge(NodeId u, NodeId v);
  void scan_replace(NodeId v);

  DynamicGraph g_;
  KernelParams params_;
  detail::EdgeSet set_;
  std::vector<std::uint32_t> dk_;
  std::uint32_t scan_budget_;
  std::vector<KernelChange> log_;
  std::uint64_t seq_ = 0;
  std::uint64_t ops_ = 0;
};

// Kernel maintainer that repairs deletions via per-node candidate pools over a
// bounded out-degree orientation; per-endpoint repair cost O(sqrt(m)/(eps*d)).
class PoolKernel final : public KernelView {
 public:
  PoolKernel(NodeId n, KernelParams params);

  const std::vector<KernelChange>& insert(NodeId u, NodeId v);
  const std::vector<KernelChange>& remove(NodeId u, NodeId v);
  const std::vector<KernelChange>& apply(const UpdateEvent& ev);

  const DynamicGraph& graph() const override { return g_; }
  const KernelParams& params() const override { return params_; }
  bool in_kernel(NodeId u, NodeId v) const override;
  std::uint32_t kernel_degree(NodeId v) const override { return dk_[v]; }
  std::vector<std::pair<NodeId, NodeId>> kernel_edges() const override;
  std::size_t kernel_edge_count() const override { return kernel_count_; }

  const Orientation& orientation() const { return orient_; }
  // Pool capacity multiplier: how many pools a node joins per unit of spare
  // kernel degree. Scales with sqrt of the edge-count estimate.
  std::uint32_t quota_factor() const { return factor_; }
  // Number of replacement candidates currently parked in v's pool.
  std::size_t pool_size(NodeId v) const { return pool_size_.at(v); }

  struct PoolAudit {
    bool lists_consistent = true;   // list partition, pool links, membership flags
    bool members_below_d = true;    // pooled tails have spare kernel degree
    bool heads_in_band = true;      // pool entries were admitted toward high heads
    bool no_excess = true;          // lin <= quota for epoch-fresh nodes
    bool low_band_exact = true;     // lin == quota when dk below threshold (fresh)
    std::size_t stale_nodes = 0;
    bool ok() const {
      return lists_consistent && members_below_d && heads_in_band && no_excess &&
             low_band_exact;
    }
  };
  PoolAudit audit() const;

  std::uint64_t ops() const { return ops_ + g_.ops().total + orient_.ops().total; }

 private:
  enum ListId : std::uint8_t { kLOut = 0, kLIn = 1, kLKern = 2 };
  struct PoolRec {
    NodeId tail = kNoNode;
    NodeId head = kNoNode;
    ListId list = kLOut;
    std::uint32_t tprev = kNilRec, tnext = kNilRec;  // tail's list links
    std::uint32_t pprev = kNilRec, pnext = kNilRec;  // head's pool links
  };
  static constexpr std::uint32_t kNilRec = 0xffffffffu;

  struct TailLists {
    std::uint32_t head[3] = {kNilRec, kNilRec, kNilRec};
    std::uint32_t tail[3] = {kNilRec, kNilRec, kNilRec};
    std::uint32_t size[3] = {0, 0, 0};
  };

  std::uint32_t quota(NodeId w) const;
  void list_push(NodeId w, ListId li, std::uint32_t r);
  void list_unlink(NodeId w, ListId li, std::uint32_t r);
  void pool_push(NodeId head, std::uint32_t r);
  void pool_unlink(NodeId head, std::uint32_t r);
  void move_list(std::uint32_t r, ListId to);  // unlinks from current, pushes to `to`
  void unpool(std::uint32_t r);                // kLIn -> kLOut
  void repair_excess(NodeId w);
  void gain_repair(std::uint32_t r);
  void kernel_add(std::uint32_t r);
  void restore_endpoint(NodeId v);
  void replay_flip(const Orientation::Flip& f);
  void sync_node(NodeId w);
  void refresh_factor();
  void sweep();

  DynamicGraph g_;
  Orientation orient_;
  KernelParams params_;
  std::vector<std::uint32_t> dk_;
  std::uint32_t thresh_;
  std::uint32_t factor_ = 1;
  std::uint64_t factor_epoch_ = 0;

  std::vector<PoolRec> recs_;
  std::vector<std::uint32_t> rec_free_;
  std::unordered_map<std::uint64_t, std::uint32_t> rec_of_;
  std::vector<TailLists> lists_;                 // indexed by tail
  std::vector<std::uint32_t> pool_head_, pool_tail_, pool_size_;  // indexed by head
  std::vector<std::uint64_t> node_epoch_;
  NodeId sweep_at_ = 0;
  std::size_t kernel_count_ = 0;

  std::vector<KernelChange> log_;
  std::uint64_t seq_ = 0;
  std::uint64_t ops_ = 0;
};

}  // namespace dynmatch
