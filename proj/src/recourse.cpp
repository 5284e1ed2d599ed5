#include "dynmatch/recourse.hpp"

#include <algorithm>
#include <cmath>

namespace dynmatch {

namespace {

// Loads `m` into a mate table, rejecting anything that is not a matching.
void load_matching(NodeId n, const Matching& m, const char* which,
                   std::vector<NodeId>& mate) {
  mate.assign(n, kNoNode);
  for (auto [u, v] : m) {
    if (u == v)
      fail(ErrorCode::BadInput,
           std::string(which) + " matching contains a self-loop");
    if (u >= n || v >= n)
      fail(ErrorCode::BadInput,
           std::string(which) + " matching references a node out of range");
    if (mate[u] != kNoNode || mate[v] != kNoNode)
      fail(ErrorCode::BadInput,
           std::string(which) + " edge list is not a matching");
    mate[u] = v;
    mate[v] = u;
  }
}

struct DiffEdge {
  NodeId u;
  NodeId v;
  bool in_from;
};

}  // namespace

TransformPlan plan_transform(NodeId n, const Matching& from, const Matching& to) {
  std::vector<NodeId> mate_from, mate_to;
  load_matching(n, from, "source", mate_from);
  load_matching(n, to, "target", mate_to);

  // Partner tables restricted to the symmetric difference. Each node has at
  // most one edge of each side, so components are alternating paths/cycles.
  std::vector<NodeId> from_partner(n, kNoNode), to_partner(n, kNoNode);
  for (auto [u, v] : from)
    if (mate_to[u] != v) {
      from_partner[u] = v;
      from_partner[v] = u;
    }
  for (auto [u, v] : to)
    if (mate_from[u] != v) {
      to_partner[u] = v;
      to_partner[v] = u;
    }

  // Walks and consumes a maximal alternating run starting at `start` with an
  // edge from `take_from`'s side; consuming clears partner entries, which also
  // terminates cycle walks.
  auto walk = [&](NodeId start, bool take_from, std::vector<DiffEdge>& out) {
    NodeId cur = start;
    while (true) {
      NodeId nxt = take_from ? from_partner[cur] : to_partner[cur];
      if (nxt == kNoNode) break;
      (take_from ? from_partner[cur] : to_partner[cur]) = kNoNode;
      (take_from ? from_partner[nxt] : to_partner[nxt]) = kNoNode;
      out.push_back({cur, nxt, take_from});
      cur = nxt;
      take_from = !take_from;
    }
  };

  // Emits steps for a component whose edge list starts with a target-side
  // edge: every removal is bundled with the addition re-covering the endpoint
  // it frees, so the size never dips.
  std::vector<PlanStep> increasing, steady, shrinking;
  auto emit_target_led = [](const std::vector<DiffEdge>& es,
                            std::vector<PlanStep>& bucket) {
    for (std::size_t i = 0; i < es.size(); i += 2) {
      PlanStep st;
      if (i + 1 < es.size()) {
        st.remove_u = es[i + 1].u;
        st.remove_v = es[i + 1].v;
      }
      st.add_u = es[i].u;
      st.add_v = es[i].v;
      bucket.push_back(st);
    }
  };
  // Component starting with a source-side edge (shrinking path or cycle): one
  // leading bare removal, then the same bundled pattern; dips by at most one.
  auto emit_source_led = [](const std::vector<DiffEdge>& es,
                            std::vector<PlanStep>& bucket) {
    PlanStep head;
    head.remove_u = es[0].u;
    head.remove_v = es[0].v;
    bucket.push_back(head);
    for (std::size_t i = 1; i < es.size(); i += 2) {
      PlanStep st;
      if (i + 1 < es.size()) {
        st.remove_u = es[i + 1].u;
        st.remove_v = es[i + 1].v;
      }
      st.add_u = es[i].u;
      st.add_v = es[i].v;
      bucket.push_back(st);
    }
  };

  std::vector<DiffEdge> es;
  // Paths first: start from nodes with exactly one incident difference edge.
  for (NodeId u = 0; u < n; ++u) {
    bool has_f = from_partner[u] != kNoNode;
    bool has_t = to_partner[u] != kNoNode;
    if (has_f == has_t) continue;  // degree 0 or 2
    es.clear();
    walk(u, has_f, es);
    if (es.empty()) continue;
    bool first_from = es.front().in_from;
    bool last_from = es.back().in_from;
    if (!first_from && !last_from) {
      emit_target_led(es, increasing);
    } else if (first_from && last_from) {
      emit_source_led(es, shrinking);
    } else {
      if (first_from) std::reverse(es.begin(), es.end());
      emit_target_led(es, steady);
    }
  }
  // Remaining difference edges form alternating cycles (size-neutral).
  for (NodeId u = 0; u < n; ++u) {
    if (from_partner[u] == kNoNode) continue;
    es.clear();
    walk(u, true, es);
    if (!es.empty()) emit_source_led(es, steady);
  }

  TransformPlan plan;
  plan.steps.reserve(increasing.size() + steady.size() + shrinking.size());
  plan.steps.insert(plan.steps.end(), increasing.begin(), increasing.end());
  plan.steps.insert(plan.steps.end(), steady.begin(), steady.end());
  plan.steps.insert(plan.steps.end(), shrinking.begin(), shrinking.end());
  return plan;
}

void RecourseParams::validate() const {
  if (!(eps > 0.0) || !(eps < 1.0 / 6.0))
    fail(ErrorCode::BadParameter,
         "recourse accuracy parameter must lie strictly between 0 and 1/6");
}

RecourseLimiter::RecourseLimiter(NodeId n, RecourseParams params)
    : n_(n), params_(params) {
  params_.validate();
  cap_ = static_cast<std::size_t>(
      std::ceil(static_cast<double>(kRecourseConstant) / params_.eps - 1e-9));
  mate_out_.assign(n_, kNoNode);
}

NodeId RecourseLimiter::mate(NodeId u) const {
  if (u >= n_) fail(ErrorCode::BadParameter, "node id out of range");
  return mate_out_[u];
}

Matching RecourseLimiter::matching() const {
  Matching m;
  m.reserve(out_size_);
  for (NodeId u = 0; u < n_; ++u)
    if (mate_out_[u] != kNoNode && u < mate_out_[u]) m.emplace_back(u, mate_out_[u]);
  return m;
}

void RecourseLimiter::record(EventKind kind, NodeId u, NodeId v) {
  changes_.push_back({seq_++, kind, u, v});
}

void RecourseLimiter::drop_edge(NodeId u, NodeId v) {
  mate_out_[u] = kNoNode;
  mate_out_[v] = kNoNode;
  --out_size_;
  ops_.tick();
}

void RecourseLimiter::add_edge(NodeId u, NodeId v) {
  mate_out_[u] = v;
  mate_out_[v] = u;
  ++out_size_;
  ops_.tick();
}

void RecourseLimiter::replan(const Matching& inner) {
  plan_ = plan_transform(n_, matching(), inner);
  target_size_ = inner.size();
  dead_.clear();
  phase_len_ = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::floor(params_.eps * static_cast<double>(target_size_) + 1e-9)));
  phase_pos_ = 0;
  quota_ = plan_.steps.empty()
               ? 0
               : (plan_.steps.size() + phase_len_ - 1) / phase_len_;
  ops_.tick(out_size_ + inner.size() + plan_.steps.size() + 1);
}

bool RecourseLimiter::execute_step(const PlanStep& step) {
  bool acted = false;
  if (step.has_remove() && mate_out_[step.remove_u] == step.remove_v) {
    drop_edge(step.remove_u, step.remove_v);
    record(EventKind::Delete, step.remove_u, step.remove_v);
    acted = true;
  }
  if (step.has_add() && !dead_.count(edge_key(step.add_u, step.add_v)) &&
      mate_out_[step.add_u] == kNoNode && mate_out_[step.add_v] == kNoNode) {
    add_edge(step.add_u, step.add_v);
    record(EventKind::Insert, step.add_u, step.add_v);
    acted = true;
  }
  return acted;
}

const std::vector<EdgeChange>& RecourseLimiter::apply(const Matching& inner,
                                                      const Matching& deleted,
                                                      const Matching& inserted) {
  changes_.clear();
  for (auto [u, v] : inserted) {
    ops_.tick();
    dead_.erase(edge_key(u, v));
  }
  for (auto [u, v] : deleted) {
    ops_.tick();
    dead_.insert(edge_key(u, v));
    if (u < n_ && v < n_ && mate_out_[u] == v) {
      drop_edge(u, v);
      record(EventKind::Delete, u, v);
    }
  }

  if (phase_pos_ >= phase_len_) replan(inner);
  std::size_t todo = std::min(quota_, plan_.remaining());
  if (target_size_ <= 1) todo = plan_.remaining();
  while (todo > 0 && changes_.size() + 2 <= cap_) {
    execute_step(plan_.steps[plan_.cursor++]);
    --todo;
    ops_.tick();
  }
  ++phase_pos_;
  return changes_;
}

}  // namespace dynmatch
