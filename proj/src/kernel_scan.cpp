#include <cmath>

#include "dynmatch/kernel.hpp"

namespace dynmatch {

namespace detail {

void EdgeSet::insert(NodeId u, NodeId v) {
  std::uint64_t key = edge_key(u, v);
  index_.emplace(key, static_cast<std::uint32_t>(list_.size()));
  if (u > v) std::swap(u, v);
  list_.emplace_back(u, v);
}

void EdgeSet::erase(NodeId u, NodeId v) {
  auto it = index_.find(edge_key(u, v));
  std::uint32_t at = it->second;
  auto last = list_.back();
  list_[at] = last;
  index_[edge_key(last.first, last.second)] = at;
  list_.pop_back();
  index_.erase(it);
}

}  // namespace detail

ScanKernel::ScanKernel(NodeId n, KernelParams params) : g_(n), params_(params), dk_(n, 0) {
  params_.validate();
  scan_budget_ = static_cast<std::uint32_t>(std::ceil(
      static_cast<double>(n) / (params_.eps * static_cast<double>(params_.d)) - 1e-9));
  if (scan_budget_ == 0) scan_budget_ = 1;
}

void ScanKernel::add_kernel_edge(NodeId u, NodeId v) {
  set_.insert(u, v);
  ++dk_[u];
  ++dk_[v];
  log_.push_back({seq_, EventKind::Insert, std::min(u, v), std::max(u, v)});
}

const std::vector<KernelChange>& ScanKernel::insert(NodeId u, NodeId v) {
  log_.clear();
  ++seq_;
  g_.insert_edge(u, v);
  if (dk_[u] < params_.d && dk_[v] < params_.d) add_kernel_edge(u, v);
  return log_;
}

// After losing a kernel edge, v scans up to scan_budget_ ring positions for a
// neighbor w with spare kernel degree whose edge to v is not already in the
// kernel; the first hit joins the kernel and the scan stops.
void ScanKernel::scan_replace(NodeId v) {
  for (std::uint32_t i = 0; i < scan_budget_; ++i) {
    if (g_.degree(v) == 0) return;
    ops_ += 1;
    NodeId w = g_.advance_cursor(v, DynamicGraph::Cursor::Scan);
    if (dk_[w] < params_.d && !set_.contains(v, w)) {
      add_kernel_edge(v, w);
      return;
    }
  }
}

const std::vector<KernelChange>& ScanKernel::remove(NodeId u, NodeId v) {
  log_.clear();
  ++seq_;
  const bool was = set_.contains(u, v);
  g_.delete_edge(u, v);
  if (was) {
    set_.erase(u, v);
    --dk_[u];
    --dk_[v];
    log_.push_back({seq_, EventKind::Delete, std::min(u, v), std::max(u, v)});
    scan_replace(u);
    scan_replace(v);
  }
  return log_;
}

const std::vector<KernelChange>& ScanKernel::apply(const UpdateEvent& ev) {
  return ev.kind == EventKind::Insert ? insert(ev.u, ev.v) : remove(ev.u, ev.v);
}

}  // namespace dynmatch
