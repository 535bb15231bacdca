#include <gtest/gtest.h>

#include "congest_light/euler_tour.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace congest_light;
using namespace congest_light::testing;

namespace {

void expect_matches_oracle(const WeightedGraph& g, NodeId rt) {
  RoundEngine eng(g);
  const auto tour = compute_euler_tour(eng, rt).value;
  const auto mst = mst_oracle(g, rt);
  const auto ref = oracle_tour(g, mst.edges, rt);
  const auto seq = tour.sequence();
  ASSERT_EQ(seq.size(), ref.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    ASSERT_EQ(seq[i].index, static_cast<std::int64_t>(i));
    ASSERT_EQ(seq[i].vertex, ref[i].vertex) << "position " << i;
    ASSERT_EQ(seq[i].time, ref[i].time) << "position " << i;
  }
  EXPECT_EQ(tour.length, 2 * mst.weight);
}

}  // namespace

TEST(LocalLengths, UnitPath) {
  const auto g = path_graph(3);
  RoundEngine eng(g);
  FragmentOptions o;
  o.size_target = 3;
  const auto f = compute_fragments(eng, 0, {}, o).value;
  ASSERT_EQ(f.count(), 1u);
  const auto l = local_tour_lengths(eng, f).value;
  EXPECT_EQ(l[2], 0.0);
  EXPECT_EQ(l[1], 2.0);
  EXPECT_EQ(l[0], 4.0);
}

TEST(LocalLengths, TwoUnitChildren) {
  const auto g = WeightedGraph::from_edges(3, {{0, 1, 1}, {0, 2, 1}});
  RoundEngine eng(g);
  FragmentOptions o;
  o.size_target = 3;
  const auto f = compute_fragments(eng, 0, {}, o).value;
  EXPECT_EQ(local_tour_lengths(eng, f).value[0], 4.0);
}

TEST(LocalLengths, RandomTreeMatchesPerFragmentRecursion) {
  const auto g = random_tree(300, 4);
  RoundEngine eng(g);
  const auto f = compute_fragments(eng, 0).value;
  const auto l = local_tour_lengths(eng, f).value;
  const auto ref = oracle_subtree_lengths(g, f.parent, f.parent_edge, [&](NodeId v, NodeId z) {
    return f.fragment_of[static_cast<std::size_t>(v)] == f.fragment_of[static_cast<std::size_t>(z)];
  });
  for (int v = 0; v < 300; ++v) EXPECT_EQ(l[static_cast<std::size_t>(v)], ref[static_cast<std::size_t>(v)]);
}

TEST(GlobalLengths, SingleFragmentEqualsLocal) {
  const auto g = path_graph(4);
  RoundEngine eng(g);
  FragmentOptions o;
  o.size_target = 10;
  const auto f = compute_fragments(eng, 0, {}, o).value;
  const auto bfs = build_bfs_tree(eng, 0).value;
  auto l = local_tour_lengths(eng, f).value;
  const auto gl = global_tour_lengths(eng, f, bfs, l).value;
  EXPECT_EQ(gl.global, l);
}

TEST(GlobalLengths, TwoFragmentsFormula) {
  // 0-1 (w 1) | 1-2 (w 3) | 2-3 (w 2): with target size 2 the path splits into {0,1} and {2,3}.
  const auto g = WeightedGraph::from_edges(4, {{0, 1, 1}, {1, 2, 3}, {2, 3, 2}});
  RoundEngine eng(g);
  FragmentOptions o;
  o.size_target = 2;
  const auto f = compute_fragments(eng, 0, {}, o).value;
  ASSERT_EQ(f.count(), 2u);
  const auto bfs = build_bfs_tree(eng, 0).value;
  auto l = local_tour_lengths(eng, f).value;
  EXPECT_EQ(l[2], 4.0);
  const auto gl = global_tour_lengths(eng, f, bfs, l).value;
  EXPECT_EQ(gl.global[0], l[0] + 4.0 + 6.0);
}

TEST(GlobalLengths, RandomTreeMatchesWholeTreeRecursion) {
  const auto g = random_tree(300, 8);
  RoundEngine eng(g);
  const auto f = compute_fragments(eng, 0).value;
  const auto bfs = build_bfs_tree(eng, 0).value;
  const auto gl = global_tour_lengths(eng, f, bfs, local_tour_lengths(eng, f).value).value;
  const auto ref = oracle_subtree_lengths(g, f.parent, f.parent_edge, [](NodeId, NodeId) { return true; });
  EXPECT_EQ(gl.global, ref);
  EXPECT_EQ(gl.global[0], 2 * mst_oracle(g).weight);
}

TEST(DfsIntervals, UnitPathHandTour) {
  const auto g = path_graph(3);
  RoundEngine eng(g);
  const auto tour = compute_euler_tour(eng, 0).value;
  const auto seq = tour.sequence();
  const std::vector<NodeId> verts{0, 1, 2, 1, 0};
  ASSERT_EQ(seq.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(seq[i].vertex, verts[i]);
    EXPECT_EQ(seq[i].time, static_cast<double>(i));
  }
}

TEST(DfsIntervals, StarVisitsLeavesInIdOrder) {
  const auto g = star_graph(4);
  RoundEngine eng(g);
  const auto tour = compute_euler_tour(eng, 0).value;
  for (NodeId leaf = 1; leaf <= 3; ++leaf) {
    ASSERT_EQ(tour.appearances[static_cast<std::size_t>(leaf)].size(), 1u);
    EXPECT_EQ(tour.appearances[static_cast<std::size_t>(leaf)][0].time, 2.0 * leaf - 1);
  }
}

TEST(UnweightedIndices, PathAndStar) {
  for (const auto& g : {path_graph(3), star_graph(4)}) {
    RoundEngine eng(g);
    const auto f = compute_fragments(eng, 0).value;
    const auto bfs = build_bfs_tree(eng, 0).value;
    const auto t = unweighted_indices(eng, f, bfs).value;
    std::vector<std::int64_t> idx;
    for (const auto& a : t.sequence()) idx.push_back(a.index);
    for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(idx[i], static_cast<std::int64_t>(i));
    EXPECT_EQ(idx.size(), static_cast<std::size_t>(2 * g.n() - 1));
  }
}

TEST(EulerTour, RandomTreesExact) {
  for (std::uint64_t s = 0; s < 20; ++s) expect_matches_oracle(random_tree(50 + static_cast<int>(s) * 23, s), 0);
}

TEST(EulerTour, RandomGraphsExactOnMst) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const int n = 80 + static_cast<int>(s) * 30;
    expect_matches_oracle(random_graph(n, 5.0 / n, s, true), static_cast<NodeId>(s % 7));
  }
}

TEST(EulerTour, AppearanceCountLaw) {
  const auto g = random_graph(200, 0.03, 5, true);
  RoundEngine eng(g);
  const auto tour = compute_euler_tour(eng, 3).value;
  const auto mst = mst_oracle(g, 3);
  std::vector<int> deg(200, 0);
  for (auto e : mst.edges) {
    ++deg[static_cast<std::size_t>(g.edge(e).u)];
    ++deg[static_cast<std::size_t>(g.edge(e).v)];
  }
  for (int v = 0; v < 200; ++v)
    EXPECT_EQ(tour.appearances[static_cast<std::size_t>(v)].size(),
              static_cast<std::size_t>(deg[static_cast<std::size_t>(v)] + (v == 3 ? 1 : 0)));
  const auto seq = tour.sequence();
  EXPECT_EQ(seq.front().time, 0.0);
  for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_LE(seq[i - 1].time, seq[i].time);
}

TEST(EulerTour, Json) {
  const auto g = path_graph(3);
  RoundEngine eng(g);
  EXPECT_NE(tour_to_json(compute_euler_tour(eng, 0).value).find("\"sequence\""), std::string::npos);
}
