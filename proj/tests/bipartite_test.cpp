#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dynmatch/bipartite_matcher.hpp"
#include "dynmatch/blossom.hpp"
#include "dynmatch/workload.hpp"
#include "test_util.hpp"

using namespace dynmatch;
using testutil::ChangeReplayer;
using testutil::valid_matching;

namespace {

// Random bipartite event stream over lows [0, half) and highs [half, 2*half).
struct BipartiteStream {
  Rng rng;
  EdgeBag live;
  NodeId half;

  BipartiteStream(NodeId half_, std::uint64_t seed) : rng(seed), half(half_) {}

  UpdateEvent next() {
    bool want_insert = live.size() == 0 || rng.below(1000) < 600;
    if (want_insert) {
      for (int tries = 0; tries < 30; ++tries) {
        NodeId lo = static_cast<NodeId>(rng.below(half));
        NodeId hi = static_cast<NodeId>(half + rng.below(half));
        if (live.contains(lo, hi)) continue;
        live.add(lo, hi);
        return {EventKind::Insert, lo, hi};
      }
    }
    auto [u, v] = live.sample(rng);
    live.remove(u, v);
    return {EventKind::Delete, u, v};
  }
};

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t x) {
  h ^= x;
  return h * 1099511628211ULL;
}

// Every matched pair must be a live edge of the matcher.
void check_edges_live(const BipartiteMatcher& bm, const Matching& m) {
  for (auto [u, v] : m) REQUIRE(bm.has_edge(u, v));
}

}  // namespace

TEST_CASE("bipartite matcher validates parameters and inputs") {
  CHECK_THROWS_AS(BipartiteMatcher(4, {0.0}), Error);
  CHECK_THROWS_AS(BipartiteMatcher(4, {1.0 / 6.0}), Error);
  CHECK_THROWS_AS(BipartiteMatcher(4, {-0.1}), Error);

  BipartiteMatcher bm(6, {0.1});
  CHECK_THROWS_AS(bm.insert(0, 6), Error);   // out of range
  CHECK_THROWS_AS(bm.insert(2, 2), Error);   // self-loop
  CHECK_THROWS_AS(bm.remove(0, 3), Error);   // missing edge

  bm.insert(0, 3);
  CHECK_THROWS_AS(bm.insert(0, 3), Error);   // duplicate
  CHECK_THROWS_AS(bm.insert(3, 1), Error);   // 3 already lives on the high side
  CHECK_THROWS_AS(bm.insert(2, 0), Error);   // 0 already lives on the low side
  CHECK(bm.side_of(0) == 1);
  CHECK(bm.side_of(3) == 2);
  CHECK(bm.side_of(5) == 0);

  // Star validation: duplicate leaf, side conflicts, orientation mismatch.
  CHECK_THROWS_AS(bm.apply_star({EventKind::Insert, 4, {2, 2}}, true), Error);
  CHECK_THROWS_AS(bm.apply_star({EventKind::Insert, 4, {4}}, true), Error);
  CHECK_THROWS_AS(bm.apply_star({EventKind::Insert, 3, {1}}, false), Error);
  CHECK_THROWS_AS(bm.apply_star({EventKind::Insert, 4, {3}}, true), Error);
  CHECK_THROWS_AS(bm.apply_star({EventKind::Delete, 4, {1}}, true), Error);
  CHECK_THROWS_AS(bm.apply_star({EventKind::Delete, 0, {3}}, true), Error);

  // Failed validation must not have touched anything.
  CHECK(bm.edge_count() == 1);
  CHECK(bm.size() == 1);
}

TEST_CASE("single edge is matched within one phase") {
  BipartiteMatcher bm(4, {0.1});
  const auto& cs = bm.insert(0, 2);
  CHECK(bm.inner_size() == 1);
  CHECK(bm.size() == 1);
  CHECK(bm.mate(0) == 2);
  CHECK(bm.mate(2) == 0);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].kind == EventKind::Insert);

  bm.remove(0, 2);
  CHECK(bm.size() == 0);
  CHECK(bm.edge_count() == 0);
  CHECK(bm.side_of(0) == 0);  // side released with the last edge
  bm.insert(2, 0);            // sides may now swap
  CHECK(bm.side_of(2) == 1);
  CHECK(bm.size() == 1);
}

TEST_CASE("shared-endpoint paths are matched optimally") {
  BipartiteMatcher bm(6, {0.1});
  bm.insert(0, 1);
  bm.insert(2, 1);  // P3: both lows compete for high 1
  CHECK(bm.inner_size() == 1);
  CHECK(bm.size() == 1);

  bm.insert(2, 3);  // path of three edges, optimum 2
  CHECK(bm.size() == 2);
  CHECK(bm.mate(0) == 1);
  CHECK(bm.mate(2) == 3);
}

TEST_CASE("rebuild repairs length-3 augmenting paths") {
  // Greedy on sorted order pairs (0,10) first and strands low 1 unless the
  // repair sweep rematches 0 to 11.
  BipartiteMatcher bm(12, {0.1});
  bm.insert(0, 10);
  bm.insert(0, 11);
  bm.insert(1, 10);
  CHECK(bm.inner_size() == 2);
  CHECK(bm.size() == 2);
  CHECK(max_matching_size(12, {{0, 10}, {0, 11}, {1, 10}}) == 2);
}

TEST_CASE("random update sweep stays within the approximation bound") {
  const NodeId half = 100;
  const NodeId n = 2 * half;
  const double eps = 0.1;
  const double factor = (1.5 + eps) * (1.0 + 6.0 * eps);
  BipartiteMatcher bm(n, {eps});
  MaxMatching oracle(n);
  BipartiteStream gen(half, 20240817);
  ChangeReplayer replay(n);
  std::uint64_t expect_seq = 0;

  for (int step = 0; step < 10000; ++step) {
    UpdateEvent ev = gen.next();
    const auto& cs = ev.kind == EventKind::Insert ? bm.insert(ev.u, ev.v)
                                                  : bm.remove(ev.u, ev.v);
    REQUIRE(cs.size() <= bm.max_changes_per_update());
    replay.apply(cs, expect_seq);
    REQUIRE(replay.size == bm.size());

    oracle.apply(ev);
    oracle.resolve();
    std::size_t mu = oracle.size();
    REQUIRE(bm.size() <= mu);
    REQUIRE(static_cast<double>(bm.size()) * factor + 1e-9 >=
            static_cast<double>(mu));
    REQUIRE(bm.phase_length() >= 1);

    if (step % 500 == 0) {
      Matching m = bm.matching();
      REQUIRE(valid_matching(n, m));
      check_edges_live(bm, m);
      Matching im = bm.inner_matching();
      REQUIRE(valid_matching(n, im));
      REQUIRE(im.size() == bm.inner_size());
    }
  }
}

TEST_CASE("star updates behave as single logical updates") {
  BipartiteMatcher bm(16, {0.1});
  bm.insert(0, 8);
  bm.insert(1, 9);
  REQUIRE(bm.size() == 2);

  SUBCASE("deleting a star that covers one matched edge drops at most one") {
    std::size_t before = bm.size();
    bm.apply_star({EventKind::Delete, 8, {0}}, true);
    CHECK(before - bm.size() <= 1);
    CHECK(bm.size() == 1);
    CHECK(!bm.has_edge(0, 8));
  }

  SUBCASE("inserting a star with a free center and free leaf gains one") {
    std::size_t before = bm.size();
    bm.apply_star({EventKind::Insert, 10, {2, 3}}, true);
    CHECK(bm.size() == before + 1);
  }

  SUBCASE("an empty star is a pure phase tick") {
    std::size_t edges = bm.edge_count();
    bm.apply_star({EventKind::Insert, 15, {}}, true);
    CHECK(bm.edge_count() == edges);
    CHECK(bm.size() == 2);
  }
}

TEST_CASE("random star sweep respects the recourse cap") {
  const NodeId half = 60;
  const NodeId n = 2 * half;
  BipartiteMatcher bm(n, {0.1});
  MaxMatching oracle(n);
  Rng rng(991177);
  EdgeBag live;
  ChangeReplayer replay(n);
  std::uint64_t expect_seq = 0;
  std::size_t prev_mu = 0;

  for (int step = 0; step < 1000; ++step) {
    StarUpdate star;
    bool center_high = true;
    bool want_insert = live.size() < 40 || rng.below(100) < 55;
    if (want_insert) {
      star.kind = EventKind::Insert;
      center_high = rng.below(2) == 0;
      star.center = static_cast<NodeId>(center_high ? half + rng.below(half)
                                                    : rng.below(half));
      std::size_t want = 1 + rng.below(20);
      for (int tries = 0; tries < 60 && star.leaves.size() < want; ++tries) {
        NodeId leaf = static_cast<NodeId>(center_high ? rng.below(half)
                                                      : half + rng.below(half));
        bool dup = live.contains(star.center, leaf) ||
                   std::count(star.leaves.begin(), star.leaves.end(), leaf);
        if (!dup) star.leaves.push_back(leaf);
      }
      if (star.leaves.empty()) continue;
      for (NodeId leaf : star.leaves) live.add(star.center, leaf);
    } else {
      // Delete a star: a random live edge's high endpoint and up to 20 of
      // that endpoint's live edges.
      star.kind = EventKind::Delete;
      auto [u, v] = live.sample(rng);
      star.center = std::max(u, v) >= half ? std::max(u, v) : std::min(u, v);
      for (auto [a, b] : live.list()) {
        if (star.leaves.size() >= 20) break;
        if (a == star.center) star.leaves.push_back(b);
        else if (b == star.center) star.leaves.push_back(a);
      }
      for (NodeId leaf : star.leaves) live.remove(star.center, leaf);
    }

    const auto& cs = bm.apply_star(star, center_high);
    REQUIRE(cs.size() <= bm.max_changes_per_update());
    replay.apply(cs, expect_seq);
    REQUIRE(replay.size == bm.size());

    for (NodeId leaf : star.leaves)
      oracle.apply({star.kind, star.center, leaf});
    oracle.resolve();
    std::size_t mu = oracle.size();
    // A star update moves the optimum by at most one.
    REQUIRE((mu > prev_mu ? mu - prev_mu : prev_mu - mu) <= 1);
    prev_mu = mu;
    REQUIRE(bm.size() <= mu);
    REQUIRE(static_cast<double>(bm.size()) * 2.56 + 1e-9 >=
            static_cast<double>(mu));

    if (step % 100 == 0) {
      Matching m = bm.matching();
      REQUIRE(valid_matching(n, m));
      check_edges_live(bm, m);
    }
  }
  CHECK(bm.max_changes_per_update() == 160);
}

TEST_CASE("identical runs produce identical change streams") {
  auto run = [] {
    const NodeId half = 40;
    BipartiteMatcher bm(2 * half, {0.12});
    BipartiteStream gen(half, 5150);
    std::uint64_t h = 1469598103934665603ULL;
    for (int step = 0; step < 1500; ++step) {
      UpdateEvent ev = gen.next();
      const auto& cs = ev.kind == EventKind::Insert ? bm.insert(ev.u, ev.v)
                                                    : bm.remove(ev.u, ev.v);
      for (const auto& c : cs) {
        h = fnv_mix(h, c.seq);
        h = fnv_mix(h, static_cast<std::uint64_t>(c.kind));
        h = fnv_mix(h, (static_cast<std::uint64_t>(c.u) << 32) | c.v);
      }
    }
    h = fnv_mix(h, bm.ops());
    h = fnv_mix(h, bm.size());
    return h;
  };
  CHECK(run() == run());
}
