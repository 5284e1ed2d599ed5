#include "dynmatch/orientation.hpp"

#include <algorithm>
#include <cmath>

namespace dynmatch {

namespace {
std::size_t isqrt_ceil(std::size_t x) {
  std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(x)));
  while (r * r < x) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= x) --r;
  return r;
}

std::uint64_t dir_key(NodeId tail, NodeId head) {
  return (static_cast<std::uint64_t>(tail) << 32) | head;
}
}  // namespace

Orientation::Orientation(NodeId n)
    : n_(n),
      out_(n),
      dout_(n, 0),
      scan_at_(n, 0),
      bucket_pos_(n, 0),
      queued_(n, 0) {
  buckets_.resize(1);
  buckets_[0].reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    bucket_pos_[v] = static_cast<std::uint32_t>(buckets_[0].size());
    buckets_[0].push_back(v);
  }
}

std::size_t Orientation::theta() const { return 2 * isqrt_ceil(2 * mhat_); }
std::size_t Orientation::head_limit() const { return isqrt_ceil(2 * mhat_); }

void Orientation::bucket_move(NodeId v, NodeId from, NodeId to) {
  ops_.tick();
  auto& b = buckets_[from];
  std::uint32_t at = bucket_pos_[v];
  NodeId last = b.back();
  b[at] = last;
  bucket_pos_[last] = at;
  b.pop_back();
  if (to >= buckets_.size()) buckets_.resize(to + 1);
  bucket_pos_[v] = static_cast<std::uint32_t>(buckets_[to].size());
  buckets_[to].push_back(v);
}

void Orientation::set_tail(NodeId tail, NodeId head) {
  tail_[edge_key(tail, head)] = tail;
  pos_[dir_key(tail, head)] = static_cast<std::uint32_t>(out_[tail].size());
  out_[tail].push_back(head);
  bucket_move(tail, dout_[tail], dout_[tail] + 1);
  ++dout_[tail];
}

void Orientation::erase_dir(NodeId u, NodeId v, NodeId tail) {
  NodeId head = (tail == u) ? v : u;
  auto pit = pos_.find(dir_key(tail, head));
  std::uint32_t at = pit->second;
  auto& lst = out_[tail];
  NodeId last = lst.back();
  lst[at] = last;
  pos_[dir_key(tail, last)] = at;
  lst.pop_back();
  pos_.erase(pit);
  bucket_move(tail, dout_[tail], dout_[tail] - 1);
  --dout_[tail];
  if (scan_at_[tail] >= lst.size()) scan_at_[tail] = 0;
}

NodeId Orientation::tail_of(NodeId u, NodeId v) const {
  auto it = tail_.find(edge_key(u, v));
  if (it == tail_.end()) fail(ErrorCode::MissingEdge, "edge not oriented");
  return it->second;
}

NodeId Orientation::max_out_degree() const {
  for (std::size_t d = buckets_.size(); d-- > 0;) {
    if (!buckets_[d].empty()) return static_cast<NodeId>(d);
  }
  return 0;
}

bool Orientation::flip_one(NodeId v, std::vector<Flip>& out, std::size_t& budget) {
  auto& lst = out_[v];
  if (lst.empty()) return false;
  std::size_t limit = std::min(lst.size(), head_limit() + 1);
  for (std::size_t i = 0; i < limit && budget > 0; ++i) {
    ops_.tick();
    --budget;
    if (scan_at_[v] >= lst.size()) scan_at_[v] = 0;
    NodeId w = lst[scan_at_[v]];
    if (dout_[w] < head_limit()) {
      // flip v->w to w->v
      tail_.erase(edge_key(v, w));
      erase_dir(v, w, v);
      set_tail(w, v);
      ++flips_total_;
      out.push_back({v, w, w});
      return true;
    }
    ++scan_at_[v];
  }
  return false;
}

void Orientation::maybe_rescale() {
  if (m_ >= mhat_ / 2 && m_ <= 2 * mhat_) return;
  std::size_t next = std::max<std::size_t>(m_, 4);
  if (next == mhat_) return;  // already at the floor scale
  std::size_t old_theta = theta();
  mhat_ = next;
  ++epoch_;
  std::size_t new_theta = theta();
  if (new_theta < old_theta) {
    // shrink: collect nodes now above the threshold
    for (std::size_t d = new_theta + 1; d < buckets_.size(); ++d) {
      for (NodeId v : buckets_[d]) {
        ops_.tick();
        if (!queued_[v]) {
          queued_[v] = 1;
          catchup_.push_back(v);
        }
      }
    }
  }
}

void Orientation::run_catchup(std::vector<Flip>& out) {
  // Spread the post-shrink repair across updates: spend up to ~sqrt(2*mhat)
  // probe steps per update draining the overfull queue. The scan cursor
  // persists across updates, so partial scans carry over instead of being
  // repeated.
  std::size_t budget = std::max<std::size_t>(4, head_limit());
  while (!catchup_.empty() && budget > 0) {
    NodeId v = catchup_.front();
    if (dout_[v] <= theta()) {
      queued_[v] = 0;
      catchup_.pop_front();
      continue;
    }
    if (!flip_one(v, out, budget)) {
      if (budget == 0) break;  // resume this node on the next update
      // A node above 2*head_limit always has an eligible head while
      // m <= 2*mhat; drop defensively rather than risk spinning.
      queued_[v] = 0;
      catchup_.pop_front();
    }
  }
}

Orientation::InsertResult Orientation::insert(NodeId u, NodeId v) {
  InsertResult res;
  NodeId tail = (dout_[u] < dout_[v] || (dout_[u] == dout_[v] && u < v)) ? u : v;
  NodeId head = (tail == u) ? v : u;
  set_tail(tail, head);
  ++m_;
  res.tail = tail;
  maybe_rescale();
  if (dout_[tail] > theta()) {
    std::size_t b = head_limit() + 1;
    flip_one(tail, res.flips, b);
  }
  run_catchup(res.flips);
  return res;
}

const std::vector<Orientation::Flip>& Orientation::remove(NodeId u, NodeId v) {
  last_flips_.clear();
  auto it = tail_.find(edge_key(u, v));
  if (it == tail_.end()) fail(ErrorCode::MissingEdge, "edge not oriented");
  NodeId tail = it->second;
  tail_.erase(it);
  erase_dir(u, v, tail);
  --m_;
  maybe_rescale();
  run_catchup(last_flips_);
  return last_flips_;
}

}  // namespace dynmatch
