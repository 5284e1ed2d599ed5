#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "dynmatch/blossom.hpp"
#include "dynmatch/doubling.hpp"
#include "dynmatch/folding.hpp"
#include "dynmatch/sparsifier.hpp"
#include "dynmatch/workload.hpp"
#include "test_util.hpp"

using namespace dynmatch;
using testutil::valid_matching;

namespace {

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t x) {
  h ^= x;
  return h * 1099511628211ULL;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sparsifier
// ---------------------------------------------------------------------------

TEST_CASE("sparsifier validates parameters and inputs") {
  CHECK_THROWS_AS(Sparsifier(4, {0.0}), Error);
  CHECK_THROWS_AS(Sparsifier(4, {1.0}), Error);
  CHECK_THROWS_AS(Sparsifier(4, {-0.5}), Error);

  Sparsifier sp(4, {0.3});
  CHECK_THROWS_AS(sp.insert(0, 4), Error);
  CHECK_THROWS_AS(sp.insert(1, 1), Error);
  CHECK_THROWS_AS(sp.remove(0, 1), Error);
  sp.insert(0, 1);
  CHECK_THROWS_AS(sp.insert(1, 0), Error);
  CHECK(sp.edge_count() == 1);
}

TEST_CASE("small degrees pass through the sparsifier unchanged") {
  const NodeId n = 30;
  Sparsifier sp(n, {0.3});
  Rng rng(77);
  EdgeBag live;
  for (int step = 0; step < 300; ++step) {
    bool ins = live.size() == 0 || rng.below(100) < 60;
    if (ins) {
      NodeId u = static_cast<NodeId>(rng.below(n));
      NodeId v = static_cast<NodeId>(rng.below(n));
      if (u == v || live.contains(u, v)) continue;
      live.add(u, v);
      sp.insert(u, v);
    } else {
      auto [u, v] = live.sample(rng);
      live.remove(u, v);
      sp.remove(u, v);
    }
    // Degrees stay far below capacity here, so nothing is ever filtered.
    auto want = live.list();
    for (auto& [a, b] : want)
      if (a > b) std::swap(a, b);
    std::sort(want.begin(), want.end());
    REQUIRE(sp.derived_edges() == want);
  }
}

TEST_CASE("capacity overflow parks edges and deletion promotes") {
  // eps = 0.9 and mhat floor 4 give capacity ceil(2/0.9) = 3.
  Sparsifier sp(8, {0.9});
  REQUIRE(sp.capacity() == 3);
  for (NodeId leaf = 1; leaf <= 5; ++leaf) sp.insert(0, leaf);
  REQUIRE(sp.capacity() == 3);  // ceil(sqrt(5)/0.9) = 3 still
  CHECK(sp.selected_count(0) == 3);
  CHECK(sp.degree(0) == 5);
  CHECK(sp.derived_edges() ==
        std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {0, 2}, {0, 3}});

  // Deleting a selected edge promotes the most recently inserted parked one.
  const auto& ev = sp.remove(0, 2);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].kind == EventKind::Delete);
  CHECK(ev[0].u == 0);
  CHECK(ev[0].v == 2);
  CHECK(ev[1].kind == EventKind::Insert);
  CHECK(ev[1].u == 0);
  CHECK(ev[1].v == 5);
  CHECK(sp.derived_edges() ==
        std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {0, 3}, {0, 5}});

  // Deleting a parked edge causes no derived events.
  CHECK(sp.remove(0, 4).empty());
}

TEST_CASE("random sweep keeps sparsifier invariants and approximation") {
  const NodeId n = 300;
  const double eps = 0.3;
  Sparsifier sp(n, {eps});
  Rng rng(424242);
  EdgeBag live;
  std::set<std::pair<NodeId, NodeId>> shadow;  // derived graph replayed
  std::vector<std::uint32_t> dd(n, 0);         // derived degrees
  int bumps = 0;

  for (int step = 0; step < 10000; ++step) {
    std::uint32_t cap_before = sp.capacity();
    const std::vector<UpdateEvent>* evs = nullptr;
    if (live.size() == 0 || rng.below(100) < 58) {
      NodeId u = static_cast<NodeId>(rng.below(n));
      NodeId v = static_cast<NodeId>(rng.below(n));
      if (u == v || live.contains(u, v)) continue;
      live.add(u, v);
      evs = &sp.insert(u, v);
    } else {
      auto [u, v] = live.sample(rng);
      live.remove(u, v);
      evs = &sp.remove(u, v);
    }
    bool bumped = sp.capacity() != cap_before;
    if (bumped) ++bumps;
    if (!bumped) REQUIRE(evs->size() <= 3);
    for (const auto& e : *evs) {
      std::pair<NodeId, NodeId> key{e.u, e.v};
      if (e.kind == EventKind::Insert) {
        REQUIRE(shadow.insert(key).second);
        ++dd[e.u];
        ++dd[e.v];
      } else {
        REQUIRE(shadow.erase(key) == 1);
        --dd[e.u];
        --dd[e.v];
      }
      REQUIRE(dd[e.u] <= sp.capacity());
      REQUIRE(dd[e.v] <= sp.capacity());
    }
    REQUIRE(shadow.size() == sp.derived_edge_count());

    if (step % 250 == 0) {
      // Full-selection rule and derived-view consistency, from scratch.
      for (NodeId v = 0; v < n; ++v) {
        REQUIRE(sp.selected_count(v) ==
                std::min<std::uint32_t>(sp.degree(v), sp.capacity()));
      }
      std::vector<std::pair<NodeId, NodeId>> got = sp.derived_edges();
      REQUIRE(std::equal(got.begin(), got.end(), shadow.begin(), shadow.end(),
                         [](auto a, auto b) { return a == b; }));
      REQUIRE(got.size() == shadow.size());
      // Matching shrinks by at most the (1 + eps) factor.
      auto src = live.list();
      std::size_t mu_src = max_matching_size(n, src);
      std::size_t mu_der = max_matching_size(n, got);
      REQUIRE(static_cast<double>(mu_src) <=
              (1.0 + eps) * static_cast<double>(mu_der) + 1e-9);
    }
  }
  CHECK(bumps > 0);  // the sweep must exercise capacity growth
}

TEST_CASE("identical sparsifier runs emit identical event streams") {
  auto run = [] {
    Sparsifier sp(60, {0.4});
    Rng rng(8888);
    EdgeBag live;
    std::uint64_t h = 1469598103934665603ULL;
    for (int step = 0; step < 2000; ++step) {
      const std::vector<UpdateEvent>* evs = nullptr;
      if (live.size() == 0 || rng.below(100) < 62) {
        NodeId u = static_cast<NodeId>(rng.below(60));
        NodeId v = static_cast<NodeId>(rng.below(60));
        if (u == v || live.contains(u, v)) continue;
        live.add(u, v);
        evs = &sp.insert(u, v);
      } else {
        auto [u, v] = live.sample(rng);
        live.remove(u, v);
        evs = &sp.remove(u, v);
      }
      for (const auto& e : *evs) {
        h = fnv_mix(h, static_cast<std::uint64_t>(e.kind));
        h = fnv_mix(h, (static_cast<std::uint64_t>(e.u) << 32) | e.v);
      }
    }
    return fnv_mix(h, sp.ops());
  };
  CHECK(run() == run());
}

// ---------------------------------------------------------------------------
// Doubling
// ---------------------------------------------------------------------------

TEST_CASE("doubling matches a single edge at full value") {
  DoublingMatcher dm(10, {0.1});
  CHECK_THROWS_AS(dm.insert(0, 10), Error);
  CHECK_THROWS_AS(dm.insert(3, 3), Error);
  CHECK_THROWS_AS(dm.remove(3, 7), Error);

  dm.insert(3, 7);
  CHECK_THROWS_AS(dm.insert(7, 3), Error);
  CHECK(dm.size() == 1);
  CHECK(dm.mate(3) == 7);
  CHECK(dm.x_half_units(3, 7) == 2);
  CHECK(dm.inner().edge_count() == 2);

  dm.remove(3, 7);
  CHECK(dm.size() == 0);
  CHECK(dm.x_half_units(3, 7) == 0);
}

TEST_CASE("doubling handles the triangle optimally") {
  DoublingMatcher dm(3, {0.1});
  dm.insert(0, 1);
  dm.insert(1, 2);
  dm.insert(2, 0);
  CHECK(dm.size() == 1);  // mu of a triangle
  // x is consistent with the inner matching.
  int total_halves = 0;
  for (auto [e, half] : dm.support()) {
    CHECK(half >= 1);
    CHECK(half <= 2);
    total_halves += half;
  }
  CHECK(total_halves == static_cast<int>(dm.inner().size()));
}

TEST_CASE("random doubling sweep keeps the support matching maximum") {
  const NodeId n = 100;
  const double inner_eps = 0.1;
  const double alpha = (1.5 + inner_eps) * (1.0 + 6.0 * inner_eps);
  DoublingMatcher dm(n, {inner_eps});
  MaxMatching oracle(n);
  Rng rng(13579);
  EdgeBag live;
  std::vector<NodeId> shadow_mate(n, kNoNode);
  std::uint64_t expect_seq = 0;

  for (int step = 0; step < 1000; ++step) {
    UpdateEvent ev{};
    if (live.size() == 0 || rng.below(100) < 57) {
      NodeId u = static_cast<NodeId>(rng.below(n));
      NodeId v = static_cast<NodeId>(rng.below(n));
      if (u == v || live.contains(u, v)) continue;
      live.add(u, v);
      ev = {EventKind::Insert, u, v};
    } else {
      auto [u, v] = live.sample(rng);
      live.remove(u, v);
      ev = {EventKind::Delete, u, v};
    }
    const auto& cs = ev.kind == EventKind::Insert ? dm.insert(ev.u, ev.v)
                                                  : dm.remove(ev.u, ev.v);
    for (const auto& c : cs) {
      REQUIRE(c.seq == expect_seq);
      ++expect_seq;
      if (c.kind == EventKind::Delete) {
        REQUIRE(shadow_mate[c.u] == c.v);
        shadow_mate[c.u] = shadow_mate[c.v] = kNoNode;
      } else {
        REQUIRE(shadow_mate[c.u] == kNoNode);
        REQUIRE(shadow_mate[c.v] == kNoNode);
        shadow_mate[c.u] = c.v;
        shadow_mate[c.v] = c.u;
      }
    }

    oracle.apply(ev);
    oracle.resolve();
    std::size_t mu = oracle.size();

    // The output is a maximum matching of the support graph.
    auto sup = dm.support();
    std::vector<std::pair<NodeId, NodeId>> sup_edges;
    std::vector<int> deg(n, 0);
    for (auto [e, half] : sup) {
      sup_edges.push_back(e);
      ++deg[e.first];
      ++deg[e.second];
      REQUIRE(live.contains(e.first, e.second));
    }
    for (NodeId v = 0; v < n; ++v) REQUIRE(deg[v] <= 2);
    REQUIRE(dm.size() == max_matching_size(n, sup_edges));
    REQUIRE(dm.size() <= mu);
    REQUIRE(static_cast<double>(dm.size()) * 3.0 * alpha + 1e-9 >=
            2.0 * static_cast<double>(mu));

    if (step % 100 == 0) {
      Matching m = dm.matching();
      REQUIRE(valid_matching(n, m));
      for (NodeId v = 0; v < n; ++v) REQUIRE(shadow_mate[v] == dm.mate(v));
      // x recomputed from the inner matching.
      std::map<std::pair<NodeId, NodeId>, int> want;
      for (auto [a, b] : dm.inner().matching()) {
        NodeId lo = a < n ? a : b;
        NodeId hi = a < n ? b : a;
        NodeId p = lo, q = hi - n;
        ++want[{std::min(p, q), std::max(p, q)}];
      }
      std::map<std::pair<NodeId, NodeId>, int> got;
      for (auto [e, half] : sup) got[e] = half;
      REQUIRE(want == got);
    }
  }
}

TEST_CASE("identical doubling runs emit identical change streams") {
  auto run = [] {
    DoublingMatcher dm(40, {0.12});
    Rng rng(31415);
    EdgeBag live;
    std::uint64_t h = 1469598103934665603ULL;
    for (int step = 0; step < 800; ++step) {
      if (live.size() == 0 || rng.below(100) < 58) {
        NodeId u = static_cast<NodeId>(rng.below(40));
        NodeId v = static_cast<NodeId>(rng.below(40));
        if (u == v || live.contains(u, v)) continue;
        live.add(u, v);
        for (const auto& c : dm.insert(u, v))
          h = fnv_mix(h, c.seq ^ ((std::uint64_t)c.u << 32) ^ c.v);
      } else {
        auto [u, v] = live.sample(rng);
        live.remove(u, v);
        for (const auto& c : dm.remove(u, v))
          h = fnv_mix(h, c.seq ^ ((std::uint64_t)c.u << 32) ^ c.v);
      }
    }
    return fnv_mix(h, dm.ops());
  };
  CHECK(run() == run());
}

// ---------------------------------------------------------------------------
// Folding
// ---------------------------------------------------------------------------

TEST_CASE("unfold expands a single weighted edge exactly") {
  FoldedGraph f = unfold_graph(2, {{0, 1, 3}});
  CHECK(f.nodes == 6);
  REQUIRE(f.edges.size() == 3);
  std::set<std::pair<NodeId, NodeId>> got(f.edges.begin(), f.edges.end());
  // Copies of 0 are ids 0..2, copies of 1 are ids 3..5 (1-based level i maps
  // to base + i - 1); the pairing is (0^i, 1^{3-i+1}).
  std::set<std::pair<NodeId, NodeId>> want{{0, 5}, {1, 4}, {2, 3}};
  CHECK(got == want);
}

TEST_CASE("unit weights unfold to an identical graph") {
  std::vector<WeightedEdge> src{{0, 1, 1}, {1, 2, 1}, {3, 0, 1}};
  FoldedGraph f = unfold_graph(4, src);
  CHECK(f.nodes == 4);
  REQUIRE(f.edges.size() == 3);
  for (std::size_t i = 0; i < src.size(); ++i) {
    CHECK(f.edges[i].first == src[i].u);
    CHECK(f.edges[i].second == src[i].v);
  }
}

TEST_CASE("unfold and refold validate their inputs") {
  CHECK_THROWS_AS(unfold_graph(2, {{0, 2, 1}}), Error);
  CHECK_THROWS_AS(unfold_graph(2, {{0, 0, 1}}), Error);
  CHECK_THROWS_AS(unfold_graph(2, {{0, 1, 0}}), Error);
  CHECK_THROWS_AS(unfold_graph(2, {{0, 1, -4}}), Error);
  CHECK_THROWS_AS(unfold_graph(3, {{0, 1, 2}, {1, 0, 3}}), Error);

  FoldedGraph f = unfold_graph(3, {{0, 1, 2}, {1, 2, 1}});
  CHECK_THROWS_AS(refold_subgraph(f, {{0, 1}}), Error);  // not an expansion edge
  CHECK(refold_subgraph(f, {}).empty());

  // Refolding everything returns the full source edge set.
  auto all = refold_subgraph(f, f.edges);
  REQUIRE(all.size() == 2);
  CHECK(all[0].w == 2);
  CHECK(all[1].w == 1);
}

TEST_CASE("unfolded matching equals maximum-weight matching on bipartite instances") {
  Rng rng(246810);
  for (int round = 0; round < 100; ++round) {
    NodeId left = 1 + static_cast<NodeId>(rng.below(5));
    NodeId right = 1 + static_cast<NodeId>(rng.below(5));
    NodeId n = left + right;
    std::vector<WeightedEdge> edges;
    for (NodeId a = 0; a < left; ++a)
      for (NodeId b = 0; b < right; ++b)
        if (rng.below(100) < 55)
          edges.push_back({a, static_cast<NodeId>(left + b),
                           static_cast<std::int64_t>(1 + rng.below(5))});
    FoldedGraph f = unfold_graph(n, edges);
    std::int64_t mwm = max_weight_matching_small(n, edges);
    std::size_t mu = max_matching_size(f.nodes, f.edges);
    REQUIRE(static_cast<std::int64_t>(mu) == mwm);
  }
}

TEST_CASE("static degree-capped subgraph refolds within the weighted bound") {
  const double eps = 0.1;
  const std::int64_t W = 2;
  std::uint32_t d = folding_kernel_degree(eps, W);
  CHECK(d >= 144.0 / (eps * eps));  // far above any desk-scale degree

  Rng rng(1357);
  for (int round = 0; round < 20; ++round) {
    NodeId left = 1 + static_cast<NodeId>(rng.below(5));
    NodeId right = 1 + static_cast<NodeId>(rng.below(5));
    NodeId n = left + right;
    std::vector<WeightedEdge> edges;
    for (NodeId a = 0; a < left; ++a)
      for (NodeId b = 0; b < right; ++b)
        if (rng.below(100) < 70)
          edges.push_back({a, static_cast<NodeId>(left + b),
                           static_cast<std::int64_t>(1 + rng.below(W))});
    if (edges.empty()) continue;
    FoldedGraph f = unfold_graph(n, edges);
    auto kernel = static_kernel(f.nodes, f.edges, d);
    // With d this large the cap never binds, so the subgraph is everything
    // and refolding recovers the full source: the bound holds with equality.
    REQUIRE(kernel.size() == f.edges.size());
    auto refolded = refold_subgraph(f, kernel);
    std::int64_t full = max_weight_matching_small(n, edges);
    std::int64_t kept = max_weight_matching_small(n, refolded);
    REQUIRE(static_cast<double>(full) <=
            (2.0 + 4.0 * eps) * static_cast<double>(kept) + 1e-9);
  }
}

TEST_CASE("static kernel caps degrees and keeps skipped edges saturated") {
  Rng rng(112233);
  std::set<std::pair<NodeId, NodeId>> edge_set;
  const NodeId n = 40;
  for (int i = 0; i < 300; ++i) {
    NodeId u = static_cast<NodeId>(rng.below(n));
    NodeId v = static_cast<NodeId>(rng.below(n));
    if (u != v) edge_set.insert({std::min(u, v), std::max(u, v)});
  }
  std::vector<std::pair<NodeId, NodeId>> edges(edge_set.begin(), edge_set.end());
  std::uint32_t d = 4;
  auto kern = static_kernel(n, edges, d);
  std::vector<std::uint32_t> dk(n, 0);
  std::set<std::pair<NodeId, NodeId>> in_k(kern.begin(), kern.end());
  for (auto [u, v] : kern) {
    ++dk[u];
    ++dk[v];
  }
  for (NodeId v = 0; v < n; ++v) REQUIRE(dk[v] <= d);
  for (auto e : edges)
    if (!in_k.count(e)) REQUIRE((dk[e.first] == d || dk[e.second] == d));
}

TEST_CASE("weighted edge list parsing") {
  std::istringstream good("0 1 3\n\n2 3 1\n");
  auto edges = read_weighted_edges(good);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].u == 0);
  CHECK(edges[0].v == 1);
  CHECK(edges[0].w == 3);
  CHECK(edges[1].w == 1);

  std::istringstream missing("0 1\n");
  CHECK_THROWS_AS(read_weighted_edges(missing), Error);
  std::istringstream zero("0 1 0\n");
  CHECK_THROWS_AS(read_weighted_edges(zero), Error);
  std::istringstream trailing("0 1 2 9\n");
  CHECK_THROWS_AS(read_weighted_edges(trailing), Error);
  std::istringstream junk("a b c\n");
  CHECK_THROWS_AS(read_weighted_edges(junk), Error);
}
