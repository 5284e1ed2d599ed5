#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <unordered_map>
#include <vector>

#include "dynmatch/common.hpp"

namespace dynmatch {

// Deterministic RNG used by every generator: a fixed-algorithm engine plus
// modulo reduction, so identical (seed, parameters) give identical streams on
// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

 private:
  std::mt19937_64 eng_;
};

// Live-edge bookkeeping shared by the generators: O(1) membership, add,
// remove, and uniform sampling.
class EdgeBag {
 public:
  bool contains(NodeId u, NodeId v) const { return idx_.count(edge_key(u, v)) != 0; }
  void add(NodeId u, NodeId v);
  void remove(NodeId u, NodeId v);
  std::size_t size() const { return list_.size(); }
  std::pair<NodeId, NodeId> sample(Rng& rng) const { return list_[rng.below(list_.size())]; }
  const std::vector<std::pair<NodeId, NodeId>>& list() const { return list_; }

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> idx_;
  std::vector<std::pair<NodeId, NodeId>> list_;
};

struct StreamOptions {
  NodeId nodes = 100;
  std::uint64_t events = 1000;
  std::uint64_t seed = 1;
  // chance (out of 1000) that a uniform step inserts rather than deletes
  std::uint32_t insert_per_mille = 600;
  std::uint64_t window = 200;         // sliding-window live-edge target
  std::uint32_t attack_per_mille = 500;  // adversary: chance to delete a victim
};

// Mixed insert/delete stream; inserts draw uniform non-edges, deletes uniform
// live edges.
std::vector<UpdateEvent> uniform_random_stream(const StreamOptions& opt);

// Fills up to `window` live edges, then alternates: every step at the window
// deletes the oldest edge, otherwise inserts a fresh one.
std::vector<UpdateEvent> sliding_window_stream(const StreamOptions& opt);

// Feedback-driven stream: each step either deletes a uniformly chosen victim
// edge (supplied by the structure under attack, e.g. current kernel or
// matching edges) or falls back to a uniform step. The caller must feed every
// generated event back via the returned event being applied (the adversary
// tracks live edges itself).
class AdversaryStream {
 public:
  explicit AdversaryStream(const StreamOptions& opt) : opt_(opt), rng_(opt.seed) {}
  UpdateEvent next(const std::vector<std::pair<NodeId, NodeId>>& victims);
  std::uint64_t generated() const { return count_; }

 private:
  UpdateEvent uniform_step();

  StreamOptions opt_;
  Rng rng_;
  EdgeBag live_;
  std::uint64_t count_ = 0;
};

}  // namespace dynmatch
