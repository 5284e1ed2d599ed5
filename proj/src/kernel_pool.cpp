#include <algorithm>
#include <cmath>

#include "dynmatch/kernel.hpp"

namespace dynmatch {

// Pool discipline, in brief:
//  - Each non-kernel out-edge record of a tail w sits in L_out (unpooled) or
//    L_in (pooled into its head's pool); kernel out-edges sit in L_kern and do
//    not count toward quotas.
//  - quota(w) = min(lout+lin, (d - dk(w)) * factor). We maintain
//    lin <= quota always, with equality whenever dk(w) is below the high-degree
//    threshold; nodes at or above the threshold may run a bounded deficit
//    (they already certify the cover property for all their edges).
//  - Entries are pooled only toward heads whose kernel degree is at or above
//    the threshold. A head's pool can therefore only be non-empty while the
//    head is high: when a head loses kernel degree, the restore step consumes
//    a pool entry (turning it into a kernel edge) before the head can sink.
//  - Orientation flips are replayed purely at the bookkeeping level (list and
//    pool moves); they never add or remove kernel edges, which keeps the
//    per-update kernel change count at <= 3 even on updates that flip.

namespace {
std::size_t isqrt_ceil(std::size_t x) {
  std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(x)));
  while (r * r < x) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= x) --r;
  return r;
}
}  // namespace

PoolKernel::PoolKernel(NodeId n, KernelParams params)
    : g_(n), orient_(n), params_(params), dk_(n, 0) {
  params_.validate();
  thresh_ = params_.p2_threshold();
  lists_.resize(n);
  pool_head_.assign(n, kNilRec);
  pool_tail_.assign(n, kNilRec);
  pool_size_.assign(n, 0);
  refresh_factor();
  node_epoch_.assign(n, factor_epoch_);
}

void PoolKernel::refresh_factor() {
  factor_epoch_ = orient_.scale_epoch() + 1;  // 0 is reserved for "never synced"
  const double s = static_cast<double>(isqrt_ceil(2 * orient_.scale()));
  const double raw =
      std::ceil((6.0 * s + 6.0) / (params_.eps * static_cast<double>(params_.d)) - 1e-9);
  factor_ = static_cast<std::uint32_t>(std::max(1.0, raw));
}

std::uint32_t PoolKernel::quota(NodeId w) const {
  const auto& tl = lists_[w];
  const std::uint64_t sum = tl.size[kLOut] + tl.size[kLIn];
  const std::uint64_t spare = params_.d > dk_[w] ? params_.d - dk_[w] : 0;
  const std::uint64_t cap = spare * static_cast<std::uint64_t>(factor_);
  return static_cast<std::uint32_t>(std::min(sum, cap));
}

void PoolKernel::list_push(NodeId w, ListId li, std::uint32_t r) {
  ops_ += 1;
  auto& tl = lists_[w];
  recs_[r].list = li;
  recs_[r].tprev = tl.tail[li];
  recs_[r].tnext = kNilRec;
  if (tl.tail[li] != kNilRec)
    recs_[tl.tail[li]].tnext = r;
  else
    tl.head[li] = r;
  tl.tail[li] = r;
  ++tl.size[li];
}

void PoolKernel::list_unlink(NodeId w, ListId li, std::uint32_t r) {
  ops_ += 1;
  auto& tl = lists_[w];
  std::uint32_t p = recs_[r].tprev, nx = recs_[r].tnext;
  if (p != kNilRec)
    recs_[p].tnext = nx;
  else
    tl.head[li] = nx;
  if (nx != kNilRec)
    recs_[nx].tprev = p;
  else
    tl.tail[li] = p;
  recs_[r].tprev = recs_[r].tnext = kNilRec;
  --tl.size[li];
}

void PoolKernel::pool_push(NodeId head, std::uint32_t r) {
  ops_ += 1;
  recs_[r].pprev = pool_tail_[head];
  recs_[r].pnext = kNilRec;
  if (pool_tail_[head] != kNilRec)
    recs_[pool_tail_[head]].pnext = r;
  else
    pool_head_[head] = r;
  pool_tail_[head] = r;
  ++pool_size_[head];
}

void PoolKernel::pool_unlink(NodeId head, std::uint32_t r) {
  ops_ += 1;
  std::uint32_t p = recs_[r].pprev, nx = recs_[r].pnext;
  if (p != kNilRec)
    recs_[p].pnext = nx;
  else
    pool_head_[head] = nx;
  if (nx != kNilRec)
    recs_[nx].pprev = p;
  else
    pool_tail_[head] = p;
  recs_[r].pprev = recs_[r].pnext = kNilRec;
  --pool_size_[head];
}

void PoolKernel::move_list(std::uint32_t r, ListId to) {
  list_unlink(recs_[r].tail, recs_[r].list, r);
  list_push(recs_[r].tail, to, r);
}

void PoolKernel::unpool(std::uint32_t r) {
  pool_unlink(recs_[r].head, r);
  move_list(r, kLOut);
}

void PoolKernel::repair_excess(NodeId w) {
  const std::uint32_t q = quota(w);
  while (lists_[w].size[kLIn] > q) {
    ops_ += 1;
    unpool(lists_[w].head[kLIn]);
  }
}

void PoolKernel::gain_repair(std::uint32_t r) {
  NodeId w = recs_[r].tail;
  if (recs_[r].list != kLOut) return;
  if (lists_[w].size[kLIn] >= quota(w)) return;
  if (dk_[recs_[r].head] < thresh_) return;  // only pool toward high heads
  move_list(r, kLIn);
  pool_push(recs_[r].head, r);
}

void PoolKernel::kernel_add(std::uint32_t r) {
  NodeId u = recs_[r].tail, v = recs_[r].head;
  sync_node(u);
  sync_node(v);
  move_list(r, kLKern);
  ++dk_[u];
  ++dk_[v];
  ++kernel_count_;
  log_.push_back({seq_, EventKind::Insert, std::min(u, v), std::max(u, v)});
  repair_excess(u);
  repair_excess(v);
}

void PoolKernel::restore_endpoint(NodeId v) {
  sync_node(v);
  if (pool_size_[v] > 0) {
    // O(1) repair: consume the oldest pooled candidate.
    std::uint32_t r = pool_head_[v];
    unpool(r);
    kernel_add(r);
    return;
  }
  // Scan unpooled out-edges: turn the first one with a spare head into a
  // kernel edge; pool the rest toward their (necessarily full) heads. While v
  // sits below the high-degree threshold the scan must drain the whole
  // unpooled list — every remaining entry needs its head as a certificate —
  // and the orientation's out-degree bound caps that work.
  std::uint32_t limit = factor_;
  if (dk_[v] < thresh_) limit = static_cast<std::uint32_t>(-1);
  for (std::uint32_t i = 0; i < limit && lists_[v].size[kLOut] > 0; ++i) {
    ops_ += 1;
    std::uint32_t r = lists_[v].head[kLOut];
    NodeId z = recs_[r].head;
    if (dk_[z] < params_.d) {
      kernel_add(r);
      return;
    }
    move_list(r, kLIn);
    pool_push(z, r);
  }
}

void PoolKernel::replay_flip(const Orientation::Flip& f) {
  auto it = rec_of_.find(edge_key(f.u, f.v));
  std::uint32_t r = it->second;
  NodeId old_tail = recs_[r].tail;
  NodeId new_tail = f.new_tail;
  sync_node(old_tail);
  sync_node(new_tail);
  const ListId li = recs_[r].list;
  if (li == kLIn) unpool(r);
  list_unlink(old_tail, recs_[r].list, r);
  recs_[r].tail = new_tail;
  recs_[r].head = old_tail;
  list_push(new_tail, li == kLKern ? kLKern : kLOut, r);
  if (li != kLKern) {
    repair_excess(old_tail);  // it lost one countable out-entry
    gain_repair(r);           // the new tail may want the entry pooled
  }
}

void PoolKernel::sync_node(NodeId w) {
  if (node_epoch_[w] == factor_epoch_) return;
  node_epoch_[w] = factor_epoch_;
  repair_excess(w);
}

void PoolKernel::sweep() {
  if (lists_.empty()) return;
  for (int i = 0; i < 2; ++i) {
    sync_node(sweep_at_);
    sweep_at_ = (sweep_at_ + 1) % static_cast<NodeId>(lists_.size());
  }
}

bool PoolKernel::in_kernel(NodeId u, NodeId v) const {
  auto it = rec_of_.find(edge_key(u, v));
  return it != rec_of_.end() && recs_[it->second].list == kLKern;
}

std::vector<std::pair<NodeId, NodeId>> PoolKernel::kernel_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(kernel_count_);
  for (const auto& [key, r] : rec_of_) {
    if (recs_[r].list == kLKern) {
      out.emplace_back(static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu));
    }
  }
  return out;
}

const std::vector<KernelChange>& PoolKernel::insert(NodeId u, NodeId v) {
  log_.clear();
  ++seq_;
  g_.insert_edge(u, v);
  auto ores = orient_.insert(u, v);
  if (orient_.scale_epoch() + 1 != factor_epoch_) refresh_factor();

  std::uint32_t r;
  if (!rec_free_.empty()) {
    r = rec_free_.back();
    rec_free_.pop_back();
  } else {
    r = static_cast<std::uint32_t>(recs_.size());
    recs_.emplace_back();
  }
  recs_[r] = PoolRec{};
  recs_[r].tail = ores.tail;
  recs_[r].head = (ores.tail == u) ? v : u;
  rec_of_[edge_key(u, v)] = r;
  list_push(ores.tail, kLOut, r);
  sync_node(u);
  sync_node(v);
  for (const auto& f : ores.flips) replay_flip(f);

  if (dk_[u] < params_.d && dk_[v] < params_.d) {
    if (recs_[r].list == kLIn) unpool(r);
    kernel_add(r);
  } else {
    gain_repair(r);
  }
  sweep();
  return log_;
}

const std::vector<KernelChange>& PoolKernel::remove(NodeId u, NodeId v) {
  log_.clear();
  ++seq_;
  auto it = rec_of_.find(edge_key(u, v));
  if (it == rec_of_.end()) fail(ErrorCode::MissingEdge, "pool kernel: missing edge");
  std::uint32_t r = it->second;
  sync_node(u);
  sync_node(v);
  const bool was_kernel = recs_[r].list == kLKern;
  NodeId old_tail = recs_[r].tail;
  if (recs_[r].list == kLIn) unpool(r);
  list_unlink(old_tail, recs_[r].list, r);
  rec_of_.erase(it);
  rec_free_.push_back(r);

  g_.delete_edge(u, v);
  const auto& flips = orient_.remove(u, v);
  if (orient_.scale_epoch() + 1 != factor_epoch_) refresh_factor();
  for (const auto& f : flips) replay_flip(f);

  if (was_kernel) {
    --dk_[u];
    --dk_[v];
    --kernel_count_;
    log_.push_back({seq_, EventKind::Delete, std::min(u, v), std::max(u, v)});
    restore_endpoint(u);
    restore_endpoint(v);
  } else {
    repair_excess(old_tail);
  }
  sweep();
  return log_;
}

const std::vector<KernelChange>& PoolKernel::apply(const UpdateEvent& ev) {
  return ev.kind == EventKind::Insert ? insert(ev.u, ev.v) : remove(ev.u, ev.v);
}

PoolKernel::PoolAudit PoolKernel::audit() const {
  PoolAudit a;
  const NodeId n = static_cast<NodeId>(lists_.size());
  std::vector<std::uint32_t> lcount(n * 3, 0), pcount(n, 0);
  std::size_t kern_seen = 0;
  for (const auto& [key, r] : rec_of_) {
    const auto& rec = recs_[r];
    NodeId ku = static_cast<NodeId>(key >> 32), kv = static_cast<NodeId>(key & 0xffffffffu);
    if (!((rec.tail == ku && rec.head == kv) || (rec.tail == kv && rec.head == ku)))
      a.lists_consistent = false;
    if (orient_.tail_of(ku, kv) != rec.tail) a.lists_consistent = false;
    lcount[rec.tail * 3 + rec.list] += 1;
    if (rec.list == kLKern) ++kern_seen;
    if (rec.list == kLIn) {
      pcount[rec.head] += 1;
      if (dk_[rec.tail] >= params_.d) a.members_below_d = false;
      if (dk_[rec.head] < thresh_) a.heads_in_band = false;
    }
  }
  if (kern_seen != kernel_count_) a.lists_consistent = false;
  for (NodeId w = 0; w < n; ++w) {
    for (int li = 0; li < 3; ++li) {
      if (lcount[w * 3 + li] != lists_[w].size[li]) a.lists_consistent = false;
      // walk the intrusive list and count
      std::uint32_t steps = 0;
      for (std::uint32_t r = lists_[w].head[li]; r != kNilRec; r = recs_[r].tnext) ++steps;
      if (steps != lists_[w].size[li]) a.lists_consistent = false;
    }
    std::uint32_t psteps = 0;
    for (std::uint32_t r = pool_head_[w]; r != kNilRec; r = recs_[r].pnext) ++psteps;
    if (psteps != pool_size_[w] || pcount[w] != pool_size_[w]) a.lists_consistent = false;

    if (node_epoch_[w] != factor_epoch_) {
      ++a.stale_nodes;
      continue;
    }
    const std::uint32_t q = quota(w);
    if (lists_[w].size[kLIn] > q) a.no_excess = false;
    if (dk_[w] < thresh_ && lists_[w].size[kLIn] != q) a.low_band_exact = false;
  }
  return a;
}

}  // namespace dynmatch
