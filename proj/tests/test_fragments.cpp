#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <queue>

#include "congest_light/mst_fragments.hpp"
#include "support.hpp"

using namespace congest_light;
using namespace congest_light::testing;

namespace {

/// Hop diameter of each fragment, measured by BFS over its internal edges.
std::vector<int> fragment_hop_diameters(const WeightedGraph& g, const FragmentDecomposition& f) {
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(g.n()));
  for (auto e : f.internal_edges) {
    adj[static_cast<std::size_t>(g.edge(e).u)].push_back(g.edge(e).v);
    adj[static_cast<std::size_t>(g.edge(e).v)].push_back(g.edge(e).u);
  }
  auto far = [&](NodeId s) {
    std::map<NodeId, int> d{{s, 0}};
    std::queue<NodeId> q;
    q.push(s);
    std::pair<int, NodeId> best{0, s};
    while (!q.empty()) {
      const NodeId x = q.front();
      q.pop();
      best = std::max(best, {d[x], x});
      for (auto y : adj[static_cast<std::size_t>(x)])
        if (!d.count(y)) {
          d[y] = d[x] + 1;
          q.push(y);
        }
    }
    return best;
  };
  std::vector<int> out;
  for (auto r : f.fragment_root) out.push_back(far(far(r).second).first);
  return out;
}

void check_structure(const WeightedGraph& g, const FragmentDecomposition& f, NodeId rt) {
  const int n = g.n();
  ASSERT_EQ(f.fragment_root[0], rt);
  EXPECT_EQ(f.parent_fragment[0], -1);
  for (std::size_t i = 0; i < f.count(); ++i)
    EXPECT_EQ(f.fragment_of[static_cast<std::size_t>(f.fragment_root[i])], static_cast<std::int32_t>(i));
  for (std::size_t i = 1; i < f.count(); ++i) {
    const auto& e = g.edge(f.fragment_parent_edge[i]);
    const NodeId r = f.fragment_root[i];
    EXPECT_TRUE(e.u == r || e.v == r);
    const NodeId other = e.u == r ? e.v : e.u;
    EXPECT_EQ(f.fragment_of[static_cast<std::size_t>(other)], f.parent_fragment[i]);
    // Following parent fragments reaches fragment 0.
    std::int32_t x = static_cast<std::int32_t>(i);
    int steps = 0;
    while (x != 0 && steps <= static_cast<int>(f.count())) {
      x = f.parent_fragment[static_cast<std::size_t>(x)];
      ++steps;
    }
    EXPECT_EQ(x, 0);
  }
  for (int v = 0; v < n; ++v) {
    const NodeId p = f.parent[static_cast<std::size_t>(v)];
    if (v == rt) {
      EXPECT_EQ(p, kNoNode);
      continue;
    }
    ASSERT_NE(p, kNoNode);
    const auto& e = g.edge(f.parent_edge[static_cast<std::size_t>(v)]);
    EXPECT_TRUE((e.u == v && e.v == p) || (e.v == v && e.u == p));
  }
}

}  // namespace

TEST(Fragments, PathOfNine) {
  const auto g = path_graph(9);
  RoundEngine eng(g);
  const auto f = compute_fragments(eng, 0).value;
  check_structure(g, f, 0);
  EXPECT_TRUE(same_sorted(f.tree_edges(), mst_oracle(g).edges));
  for (int d : fragment_hop_diameters(g, f)) EXPECT_LE(d, 2 * 3);
}

TEST(Fragments, Star) {
  const auto g = star_graph(50);
  RoundEngine eng(g);
  const auto f = compute_fragments(eng, 0).value;
  check_structure(g, f, 0);
  EXPECT_TRUE(same_sorted(f.tree_edges(), mst_oracle(g).edges));
  EXPECT_LE(static_cast<double>(f.count()), 4 * std::sqrt(50.0));
}

TEST(Fragments, SingleVertex) {
  const auto g = WeightedGraph::from_edges(1, {});
  RoundEngine eng(g);
  const auto f = compute_fragments(eng, 0).value;
  EXPECT_EQ(f.count(), 1u);
  EXPECT_TRUE(f.tree_edges().empty());
}

TEST(Fragments, RandomBoundsFourRootN) {
  const auto g = random_graph(400, 0.02, 77);
  RoundEngine eng(g);
  const auto r = compute_fragments(eng, 5);
  const auto& f = r.value;
  check_structure(g, f, 5);
  const double bound = 4 * std::sqrt(400.0);
  EXPECT_LE(static_cast<double>(f.count()), bound);
  for (int d : fragment_hop_diameters(g, f)) EXPECT_LE(d, bound);
  EXPECT_LE(r.metrics.max_words_per_edge_round, eng.config().word_budget);
}

TEST(Fragments, EdgeSetEqualsMstOver50Seeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 30 + static_cast<int>(seed * 7 % 170);
    const auto g = random_graph(n, 6.0 / n, seed);
    const NodeId rt = static_cast<NodeId>(seed % static_cast<std::uint64_t>(n));
    RoundEngine eng(g);
    const auto f = compute_fragments(eng, rt).value;
    check_structure(g, f, rt);
    ASSERT_TRUE(same_sorted(f.tree_edges(), mst_oracle(g).edges)) << "seed " << seed;
    EXPECT_LE(static_cast<double>(f.count()), 4 * std::sqrt(n));
    for (int d : fragment_hop_diameters(g, f)) EXPECT_LE(d, 4 * std::sqrt(n));
  }
}

TEST(Fragments, MaskedTreeIsReproduced) {
  // Fragments of a shortest-path tree rather than the MST.
  const auto g = random_graph(200, 0.04, 9);
  const auto d = sssp_oracle(g, 0);
  std::vector<char> mask(g.m(), 0);
  std::vector<EdgeId> spt;
  for (int v = 1; v < 200; ++v) {
    EdgeId best = -1;
    for (const auto& inc : g.adj(v))
      if (d[static_cast<std::size_t>(inc.to)] + inc.w == d[static_cast<std::size_t>(v)] && (best < 0 || inc.to < g.edge(best).u + g.edge(best).v - v))
        best = inc.edge;
    mask[static_cast<std::size_t>(best)] = 1;
    spt.push_back(best);
  }
  RoundEngine eng(g);
  const auto f = compute_fragments(eng, 0, mask).value;
  check_structure(g, f, 0);
  EXPECT_TRUE(same_sorted(f.tree_edges(), spt));
}

TEST(Fragments, JsonDump) {
  const auto g = path_graph(4);
  RoundEngine eng(g);
  const auto s = fragments_to_json(compute_fragments(eng, 0).value);
  EXPECT_NE(s.find("\"fragment_of\""), std::string::npos);
}
