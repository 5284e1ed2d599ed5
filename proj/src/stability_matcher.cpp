#include "dynmatch/stability_matcher.hpp"

#include <algorithm>
#include <cmath>

namespace dynmatch {

void StabilityParams::validate() const {
  if (!(eps > 0.0) || eps > 1.0 / 3.0 + 1e-12)
    fail(ErrorCode::BadParameter, "stability: eps must lie in (0, 1/3]");
  if (max_degree < 1) fail(ErrorCode::BadParameter, "stability: max_degree must be >= 1");
}

StabilityMatcher::StabilityMatcher(NodeId n, StabilityParams params)
    : n_(n), params_(params), g_(n), mate_out_(n, kNoNode), engine_(n) {
  params_.validate();
}

const std::vector<EdgeChange>& StabilityMatcher::insert(NodeId u, NodeId v) {
  return step({EventKind::Insert, u, v});
}

const std::vector<EdgeChange>& StabilityMatcher::remove(NodeId u, NodeId v) {
  return step({EventKind::Delete, u, v});
}

const std::vector<EdgeChange>& StabilityMatcher::apply(const UpdateEvent& ev) {
  return step(ev);
}

std::vector<std::pair<NodeId, NodeId>> StabilityMatcher::matching() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(out_size_);
  for (NodeId v = 0; v < n_; ++v) {
    if (mate_out_[v] != kNoNode && v < mate_out_[v]) out.emplace_back(v, mate_out_[v]);
  }
  return out;
}

void StabilityMatcher::record(EventKind kind, NodeId u, NodeId v) {
  changes_.push_back({seq_++, kind, u, v});
}

void StabilityMatcher::drop_output_edge(NodeId u, NodeId v) {
  mate_out_[u] = kNoNode;
  mate_out_[v] = kNoNode;
  --out_size_;
  record(EventKind::Delete, u, v);
  ops_.tick();
}

const std::vector<EdgeChange>& StabilityMatcher::step(const UpdateEvent& ev) {
  changes_.clear();
  if (ev.kind == EventKind::Insert) {
    if (ev.u < n_ && ev.v < n_ && ev.u != ev.v &&
        (g_.degree(ev.u) >= params_.max_degree || g_.degree(ev.v) >= params_.max_degree))
      fail(ErrorCode::DegreeBoundExceeded, "stability: insert exceeds max_degree");
    g_.insert_edge(ev.u, ev.v);
    if (rebuild_active_) dead_since_snapshot_.erase(edge_key(ev.u, ev.v));
  } else {
    g_.delete_edge(ev.u, ev.v);
    if (rebuild_active_) dead_since_snapshot_.insert(edge_key(ev.u, ev.v));
    if (mate_out_[ev.u] == ev.v) drop_output_edge(ev.u, ev.v);
  }
  ops_.tick();

  if (phase_pos_ == 0) {
    // This update opens a phase: snapshot now, spread the rebuild over the
    // phase's remaining updates (none if the phase is a single update).
    start_phase();
    phase_pos_ = 1;
  } else {
    ++phase_pos_;
    run_milestones(milestones_per_update_);
  }
  if (phase_pos_ >= phase_len_) {
    drain_rebuild();
    swap_in_rebuild();
    phase_pos_ = 0;
    ++phase_idx_;
  }
  return changes_;
}

void StabilityMatcher::start_phase() {
  phase_len_ =
      static_cast<std::size_t>(std::floor(params_.eps * static_cast<double>(out_size_) / 5.0 +
                                          1e-9)) +
      1;
  snapshot_edges_ = g_.edges();
  ops_.tick(snapshot_edges_.size() + 1);
  std::uint64_t before = engine_.ops();
  engine_.reset();
  for (NodeId v = 0; v < n_; ++v) {
    if (mate_out_[v] != kNoNode && v < mate_out_[v]) engine_.seed_pair(v, mate_out_[v]);
  }
  ops_.tick(engine_.ops() - before);
  load_at_ = 0;
  sweep_at_ = 0;
  milestones_left_ = snapshot_edges_.size() + n_;
  rebuild_active_ = true;
  dead_since_snapshot_.clear();
  if (phase_len_ <= 1) {
    milestones_per_update_ = milestones_left_;
  } else {
    milestones_per_update_ =
        (milestones_left_ + (phase_len_ - 1) - 1) / (phase_len_ - 1);
  }
}

void StabilityMatcher::run_milestones(std::size_t k) {
  std::uint64_t before = engine_.ops();
  while (k > 0 && milestones_left_ > 0) {
    if (load_at_ < snapshot_edges_.size()) {
      auto [u, v] = snapshot_edges_[load_at_++];
      engine_.load_edge(u, v);
    } else {
      engine_.augment_from(sweep_at_++);
    }
    --milestones_left_;
    --k;
  }
  ops_.tick(engine_.ops() - before);
}

void StabilityMatcher::drain_rebuild() { run_milestones(milestones_left_); }

void StabilityMatcher::swap_in_rebuild() {
  // Replacement = engine matching minus edges deleted since the snapshot.
  std::vector<std::pair<NodeId, NodeId>> fresh;
  fresh.reserve(engine_.size());
  for (NodeId v = 0; v < n_; ++v) {
    NodeId w = engine_.mate(v);
    if (w == kNoNode || v > w) continue;
    if (!dead_since_snapshot_.empty() && dead_since_snapshot_.count(edge_key(v, w))) continue;
    fresh.emplace_back(v, w);
  }
  ops_.tick(n_ / 8 + fresh.size() + 1);

  std::unordered_set<std::uint64_t> fresh_keys;
  fresh_keys.reserve(fresh.size() * 2);
  for (auto [u, v] : fresh) fresh_keys.insert(edge_key(u, v));
  // Deletes first so every prefix of the change list is a valid matching.
  for (NodeId v = 0; v < n_; ++v) {
    NodeId w = mate_out_[v];
    if (w == kNoNode || v > w) continue;
    if (!fresh_keys.count(edge_key(v, w))) record(EventKind::Delete, v, w);
  }
  for (auto [u, v] : fresh) {
    if (mate_out_[u] != v) record(EventKind::Insert, u, v);
  }
  for (NodeId v = 0; v < n_; ++v) mate_out_[v] = kNoNode;
  for (auto [u, v] : fresh) {
    mate_out_[u] = v;
    mate_out_[v] = u;
  }
  out_size_ = fresh.size();
  rebuild_active_ = false;
  dead_since_snapshot_.clear();
}

std::vector<std::pair<NodeId, NodeId>> static_near_max(
    NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges, double eps) {
  if (!(eps > 0.0) || eps > 1.0 / 3.0 + 1e-12)
    fail(ErrorCode::BadParameter, "static_near_max: eps must lie in (0, 1/3]");
  return max_matching(n, edges);
}

}  // namespace dynmatch
