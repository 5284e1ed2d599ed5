#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynmatch/bipartite_matcher.hpp"
#include "dynmatch/common.hpp"
#include "dynmatch/degrees.hpp"
#include "dynmatch/kernel.hpp"
#include "dynmatch/recourse.hpp"
#include "dynmatch/sparsifier.hpp"
#include "dynmatch/stability_matcher.hpp"

namespace dynmatch {

enum class PipelineVariant : std::uint8_t { TwoPlusEps, BeatTwo };

// Full configuration of a composed matcher. Two variants share the config:
//
//   two_plus_eps: kernel + near-maximum matcher on the kernel. The kernel runs
//   at accuracy eps/8 so its quality loss is a (2 + eps) factor, and the
//   output matcher adds (1 + eps): the maintained matching is
//   (1+eps)(2+eps)-approximate against the full graph at every step.
//
//   beat_two: kernel + approximate degree counters + threshold subgraph
//   families + one recourse-limited bipartite matcher per family. The union A
//   of the matcher outputs is added to the kernel edge set; a near-maximum
//   matcher at accuracy delta/8 runs on that augmented edge set. Because the
//   augmented set contains the kernel, the output is at least
//   mu(G) / ((2+8*eps)(1+delta/8)) — and better than any kernel-only
//   composition on graphs whose kernel hides half the matching behind
//   length-3 augmenting paths.
//
// The optional degree-capping sparsifier (sparsify=on) filters the input
// graph first; every stage then runs on the filtered graph and the
// approximation loses one further (1 + eps) factor.
struct PipelineConfig {
  double eps = 0.05;
  double delta = 0.02;
  double s = 0.2;
  // Kernel degree cap; 0 derives it from the edge-count scale (and the cap
  // then changes only through gradual rescaling).
  std::uint32_t d = 0;
  PipelineVariant variant = PipelineVariant::TwoPlusEps;
  bool sparsify = false;

  // Operating point under which the asymptotic accuracy statement is made.
  // At this accuracy the subgraph family count is astronomically large, so
  // these values exist for documentation and validity checking only; runnable
  // configurations use the desk profile.
  static constexpr double kTheoryEps = 2e-8;
  static constexpr double kTheoryDelta = 2e-6;
  static constexpr double kTheoryS = 2e-4;

  static PipelineConfig theory_profile(PipelineVariant v);
  // Default hands-on operating point: eps=0.05, delta=0.02, s=0.2, d=auto.
  static PipelineConfig desk_profile(PipelineVariant v);

  // Structural validity: accuracy ranges required by the stages in use and
  // the degree-cap floor below. Throws BadParameter with a specific message.
  void validate() const;

  // Smallest degree cap for which the kernel-quality factor claimed by the
  // variant holds (two_plus_eps: ceil(8/eps); beat_two: ceil(1/eps)).
  std::uint32_t min_degree() const;
  // Degree cap in effect at edge-count scale mhat: the explicit d if set,
  // otherwise the variant's growth rule (two_plus_eps: mhat^{1/4}/sqrt(eps);
  // beat_two: mhat^{3/8}), floored at min_degree().
  std::uint32_t degree_for(std::size_t mhat) const;

  // Key-value text form, one `key=value` per line; `#` starts a comment.
  // Keys: eps, delta, s, d (auto or a positive integer), variant
  // (two_plus_eps | beat_two), sparsify (on | off). Missing keys keep their
  // defaults; the result is validated before it is returned.
  static PipelineConfig from_string(const std::string& text);
  static PipelineConfig from_file(const std::string& path);
  std::string to_string() const;
};

const char* variant_name(PipelineVariant v);

// Per-update instrumentation, reset at the start of every host update.
// The *_ops fields are elementary-operation deltas per stage; the *_changes
// fields count edge changes emitted by a stage during the update.
struct PipelineStats {
  std::uint64_t graph_ops = 0;    // input filter (sparsifier), when enabled
  std::uint64_t kernel_ops = 0;   // kernel maintainer, incl. its graph store
  std::uint64_t degree_ops = 0;   // degree counters + threshold subgraphs
  std::uint64_t matcher_ops = 0;  // per-family bipartite matchers
  std::uint64_t output_ops = 0;   // output near-maximum matcher
  std::size_t kernel_changes = 0;
  std::size_t a_changes = 0;       // matcher-output (A) edge changes
  std::size_t ak_changes = 0;      // changes to the output matcher's graph
  std::size_t output_changes = 0;  // changes to the output matching
  std::uint64_t total_ops() const {
    return graph_ops + kernel_ops + degree_ops + matcher_ops + output_ops;
  }
};

namespace detail {

// One fully-built stage chain bound to a fixed degree cap. The rescaling
// wrapper below owns up to two of these (current and incoming) and is the
// only caller.
class PipelineCore {
 public:
  virtual ~PipelineCore() = default;

  // Feeds one host event through every stage in order. Returns the output
  // matching's changes for this event; the buffer is reused by the next call.
  virtual const std::vector<EdgeChange>& apply(const UpdateEvent& ev) = 0;

  virtual std::size_t matching_size() const = 0;
  virtual NodeId mate(NodeId v) const = 0;
  virtual Matching matching() const = 0;

  virtual const PipelineStats& stats() const = 0;
  virtual std::uint64_t ops() const = 0;

  virtual std::uint32_t degree_cap() const = 0;         // kernel degree cap d
  virtual std::uint32_t output_degree_cap() const = 0;  // output-graph cap
  virtual const KernelView& kernel() const = 0;

  // Degree of v in the output matcher's graph (kernel plus matcher outputs).
  virtual std::uint32_t ak_degree(NodeId v) const = 0;
  // Edge events applied to the output matcher's graph this update.
  virtual const std::vector<UpdateEvent>& ak_events() const = 0;
  // Snapshots, sorted by endpoint pair. For two_plus_eps the augmented set
  // equals the kernel and the auxiliary set is empty.
  virtual std::vector<std::pair<NodeId, NodeId>> ak_edges() const = 0;
  virtual std::vector<std::pair<NodeId, NodeId>> a_edges() const = 0;
  virtual std::uint32_t families() const = 0;
  // Per-star change cap of the family matchers (0 when there are none).
  virtual std::size_t star_recourse_cap() const = 0;
};

}  // namespace detail

// Composed dynamic matcher with gradual rescaling of the edge-count scale.
//
// The edge-count scale mhat fixes the derived degree cap. Whenever the live
// edge count leaves [mhat/2, 2*mhat], the scale is reset to the current
// count. If the derived parameters are unchanged (always the case with an
// explicit d) the reset is free. Otherwise a fresh stage chain is built and
// run alongside the old one for a window of (old mhat) updates: each update
// feeds the newcomer a batch of backlog edges plus the live event, while the
// old chain keeps serving the output. At the window's end the output switches
// to the newcomer, emitting the difference between the two matchings as
// ordinary output changes (removals first), and the old chain is dropped.
//
// All emitted changes carry the wrapper's own contiguous sequence numbers;
// the output matching is valid at every moment, including mid-window and
// across the switch.
class Pipeline {
 public:
  Pipeline(NodeId n, PipelineConfig config);

  const std::vector<EdgeChange>& insert(NodeId u, NodeId v);
  const std::vector<EdgeChange>& remove(NodeId u, NodeId v);
  const std::vector<EdgeChange>& apply(const UpdateEvent& ev);

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return live_.size(); }
  std::size_t mhat() const { return mhat_; }
  const PipelineConfig& config() const { return cfg_; }

  std::size_t size() const { return out_size_; }
  NodeId mate(NodeId v) const;
  bool matched(NodeId u, NodeId v) const;
  // Current output matching as (min, max) pairs sorted by first endpoint.
  Matching matching() const;

  // Instrumentation for the last update. Ops cover both chains while a
  // rescale window is open; the change counts describe the serving chain,
  // except output_changes which counts the wrapper's emitted changes.
  const PipelineStats& stats() const { return stats_; }
  std::uint64_t ops() const;

  std::uint32_t degree_cap() const;         // serving chain's kernel cap
  std::uint32_t output_degree_cap() const;  // its output-graph degree cap
  std::uint32_t families() const;           // threshold families (0 for 2+eps)
  const KernelView& kernel_view() const;

  std::uint32_t ak_degree(NodeId v) const;
  const std::vector<UpdateEvent>& ak_events() const;
  std::vector<std::pair<NodeId, NodeId>> ak_edges() const;
  std::vector<std::pair<NodeId, NodeId>> a_edges() const;

  // Hard bound on ak_changes per host update for the serving chain: up to 3
  // kernel changes, plus one recourse-capped matcher reaction per membership
  // star (at most 26 stars per family per update). With the sparsifier on,
  // a host update expands to up to 3 filtered events in steady state and the
  // bound triples; filter bursts that raise its capacity are charged to the
  // update that grew the edge count and are not covered.
  std::size_t max_ak_changes_per_update() const;

  bool rescale_in_progress() const { return window_active_; }
  std::uint64_t rescale_count() const { return rescale_count_; }

 private:
  std::unique_ptr<detail::PipelineCore> make_core(std::size_t mhat) const;
  void absorb(const std::vector<EdgeChange>& core_changes);
  void record(EventKind kind, NodeId u, NodeId v);
  void advance_window(const UpdateEvent& ev);
  void finish_window();
  void maybe_trigger();
  void collect_stats();

  NodeId n_;
  PipelineConfig cfg_;
  std::size_t mhat_ = 1;

  std::unique_ptr<detail::PipelineCore> active_;
  std::unique_ptr<detail::PipelineCore> incoming_;
  std::uint64_t retired_ops_ = 0;

  std::unordered_set<std::uint64_t> live_;

  // Rescale window state.
  bool window_active_ = false;
  std::size_t window_left_ = 0;
  std::size_t feed_rate_ = 0;
  std::deque<std::pair<NodeId, NodeId>> backlog_;
  std::unordered_set<std::uint64_t> pending_;
  std::uint64_t rescale_count_ = 0;

  // Output mirror: the matching as emitted through the wrapper's changes.
  std::vector<NodeId> mate_;
  std::size_t out_size_ = 0;
  std::vector<EdgeChange> changes_;
  std::uint64_t seq_ = 0;
  PipelineStats stats_;
};

}  // namespace dynmatch
