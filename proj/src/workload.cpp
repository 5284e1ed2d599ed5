#include "dynmatch/workload.hpp"

namespace dynmatch {

void EdgeBag::add(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  idx_.emplace(edge_key(u, v), static_cast<std::uint32_t>(list_.size()));
  list_.emplace_back(u, v);
}

void EdgeBag::remove(NodeId u, NodeId v) {
  auto it = idx_.find(edge_key(u, v));
  std::uint32_t at = it->second;
  auto last = list_.back();
  list_[at] = last;
  idx_[edge_key(last.first, last.second)] = at;
  list_.pop_back();
  idx_.erase(edge_key(u, v));
}

namespace {

// Draws a uniform non-edge; the retry loop terminates fast while the graph is
// far from complete, which all stream parameters here guarantee.
std::pair<NodeId, NodeId> draw_non_edge(NodeId n, const EdgeBag& live, Rng& rng) {
  for (;;) {
    NodeId u = static_cast<NodeId>(rng.below(n));
    NodeId v = static_cast<NodeId>(rng.below(n));
    if (u == v || live.contains(u, v)) continue;
    return {u, v};
  }
}

}  // namespace

std::vector<UpdateEvent> uniform_random_stream(const StreamOptions& opt) {
  Rng rng(opt.seed);
  EdgeBag live;
  std::vector<UpdateEvent> out;
  out.reserve(opt.events);
  for (std::uint64_t i = 0; i < opt.events; ++i) {
    bool ins = live.size() == 0 || rng.below(1000) < opt.insert_per_mille;
    if (ins) {
      auto [u, v] = draw_non_edge(opt.nodes, live, rng);
      live.add(u, v);
      out.push_back({EventKind::Insert, u, v});
    } else {
      auto [u, v] = live.sample(rng);
      live.remove(u, v);
      out.push_back({EventKind::Delete, u, v});
    }
  }
  return out;
}

std::vector<UpdateEvent> sliding_window_stream(const StreamOptions& opt) {
  Rng rng(opt.seed);
  EdgeBag live;
  std::deque<std::pair<NodeId, NodeId>> fifo;
  std::vector<UpdateEvent> out;
  out.reserve(opt.events);
  for (std::uint64_t i = 0; i < opt.events; ++i) {
    if (live.size() >= opt.window) {
      auto [u, v] = fifo.front();
      fifo.pop_front();
      live.remove(u, v);
      out.push_back({EventKind::Delete, u, v});
    } else {
      auto [u, v] = draw_non_edge(opt.nodes, live, rng);
      live.add(u, v);
      fifo.emplace_back(std::min(u, v), std::max(u, v));
      out.push_back({EventKind::Insert, u, v});
    }
  }
  return out;
}

UpdateEvent AdversaryStream::uniform_step() {
  bool ins = live_.size() == 0 || rng_.below(1000) < opt_.insert_per_mille;
  if (ins) {
    auto [u, v] = draw_non_edge(opt_.nodes, live_, rng_);
    live_.add(u, v);
    return {EventKind::Insert, u, v};
  }
  auto [u, v] = live_.sample(rng_);
  live_.remove(u, v);
  return {EventKind::Delete, u, v};
}

UpdateEvent AdversaryStream::next(const std::vector<std::pair<NodeId, NodeId>>& victims) {
  ++count_;
  if (!victims.empty() && rng_.below(1000) < opt_.attack_per_mille) {
    auto [u, v] = victims[rng_.below(victims.size())];
    if (live_.contains(u, v)) {
      live_.remove(u, v);
      return {EventKind::Delete, u, v};
    }
  }
  return uniform_step();
}

}  // namespace dynmatch
