#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "congest_light/primitives.hpp"
#include "support.hpp"

using namespace congest_light;
using namespace congest_light::testing;

namespace {

int hop_diameter(const WeightedGraph& g) {
  int d = 0;
  for (int v = 0; v < g.n(); ++v) {
    const auto h = hop_distances(g, v);
    d = std::max(d, *std::max_element(h.begin(), h.end()));
  }
  return d;
}

const MergeFn kMax = [](std::span<Word> acc, std::span<const Word> in) {
  if (int_of(in[0]) > int_of(acc[0])) acc[0] = in[0];
};

}  // namespace

TEST(Bfs, StarDepthsOne) {
  const auto g = star_graph(5);
  RoundEngine eng(g);
  const auto t = build_bfs_tree(eng, 0).value;
  for (int v = 1; v < 5; ++v) EXPECT_EQ(t.depth[static_cast<std::size_t>(v)], 1);
  EXPECT_EQ(t.parent[0], kNoNode);
}

TEST(Bfs, PathDepth) {
  const auto g = path_graph(5);
  RoundEngine eng(g);
  const auto r = build_bfs_tree(eng, 0);
  EXPECT_EQ(r.value.depth[4], 4);
  EXPECT_LE(r.metrics.rounds_used, 4 + 2);
}

TEST(Bfs, RandomSpanningTreeMatchesCentralBfs) {
  const auto g = random_graph(200, 0.04, 17);
  RoundEngine eng(g);
  const auto r = build_bfs_tree(eng, 3);
  const auto h = hop_distances(g, 3);
  std::vector<int> uf(200);
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) { return uf[static_cast<std::size_t>(x)] == x ? x : uf[static_cast<std::size_t>(x)] = find(uf[static_cast<std::size_t>(x)]); };
  int joins = 0;
  for (int v = 0; v < 200; ++v) {
    EXPECT_EQ(r.value.depth[static_cast<std::size_t>(v)], h[static_cast<std::size_t>(v)]);
    const NodeId p = r.value.parent[static_cast<std::size_t>(v)];
    if (p == kNoNode) continue;
    EXPECT_GE(g.find_edge(v, p), 0);
    EXPECT_EQ(r.value.depth[static_cast<std::size_t>(v)], r.value.depth[static_cast<std::size_t>(p)] + 1);
    const int a = find(v), b = find(p);
    EXPECT_NE(a, b);
    uf[static_cast<std::size_t>(a)] = b;
    ++joins;
  }
  EXPECT_EQ(joins, 199);
  EXPECT_LE(r.metrics.rounds_used, hop_diameter(g) + 2);
}

TEST(Bfs, DisconnectedGraphReportsVertices) {
  GraphOptions o;
  o.require_connected = false;
  const auto g = WeightedGraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}}, o);
  RoundEngine eng(g);
  try {
    build_bfs_tree(eng, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Disconnected);
    EXPECT_NE(std::string(e.what()).find("unreachable vertex"), std::string::npos);
  }
}

TEST(PipelineBroadcast, SingleMessageOnPath) {
  const auto g = path_graph(9);
  RoundEngine eng(g);
  const auto tree = build_bfs_tree(eng, 0).value;
  const auto r = pipeline_broadcast(eng, tree, {{0, {word_of_int(7)}}});
  EXPECT_LE(r.metrics.rounds_used, 2 * (1 + 8) + 2);
  for (const auto& got : r.value) {
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(int_of(got[0].payload[0]), 7);
  }
}

TEST(PipelineBroadcast, EmptyIsFree) {
  const auto g = path_graph(4);
  RoundEngine eng(g);
  const auto tree = build_bfs_tree(eng, 0).value;
  EXPECT_EQ(pipeline_broadcast(eng, tree, {}).metrics.rounds_used, 0);
}

TEST(PipelineBroadcast, CompletenessAndBoundOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = seed == 0 ? 400 : 60 + static_cast<int>(seed % 7) * 20;
    const auto g = random_graph(n, seed == 0 ? 0.02 : 0.08, seed + 100);
    RoundEngine eng(g);
    const auto tree = build_bfs_tree(eng, 0).value;
    std::mt19937_64 rng(seed);
    const int M = static_cast<int>(std::ceil(std::sqrt(n)));
    std::vector<BroadcastItem> items;
    std::multiset<std::pair<NodeId, std::int64_t>> expect;
    for (int i = 0; i < M; ++i) {
      const auto o = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n));
      items.push_back({o, {word_of_int(i)}});
      expect.insert({o, i});
    }
    const auto r = pipeline_broadcast(eng, tree, items);
    for (const auto& got : r.value) {
      std::multiset<std::pair<NodeId, std::int64_t>> have;
      for (const auto& it : got) have.insert({it.origin, int_of(it.payload[0])});
      ASSERT_EQ(have, expect);
    }
    EXPECT_LE(r.metrics.rounds_used, 2 * (M + tree.height()) + 2);
    EXPECT_LE(r.metrics.max_words_per_edge_round, eng.config().word_budget);
  }
}

TEST(Convergecast, MaxIdOnPath) {
  const auto g = path_graph(5);
  RoundEngine eng(g);
  const auto tree = build_bfs_tree(eng, 0).value;
  std::vector<std::vector<KeyedItem>> items(5);
  for (int v = 0; v < 5; ++v) items[static_cast<std::size_t>(v)].push_back({0, {word_of_int(v)}});
  const auto r = convergecast_aggregate(eng, tree, items, 1, kMax);
  ASSERT_EQ(r.value.size(), 1u);
  EXPECT_EQ(int_of(r.value[0].value[0]), 4);
}

TEST(Convergecast, PerClusterMaxMatchesGroupBy) {
  const auto g = random_graph(100, 0.08, 5);
  RoundEngine eng(g);
  const auto tree = build_bfs_tree(eng, 0).value;
  std::mt19937_64 rng(3);
  std::vector<std::vector<KeyedItem>> items(100);
  std::map<Key, std::int64_t> oracle;
  for (int v = 0; v < 100; ++v) {
    const Key k = rng() % 10;
    const auto val = static_cast<std::int64_t>(rng() % 1000);
    items[static_cast<std::size_t>(v)].push_back({k, {word_of_int(val)}});
    oracle[k] = std::max(oracle.count(k) ? oracle[k] : -1, val);
  }
  const auto r = convergecast_aggregate(eng, tree, items, 10, kMax);
  ASSERT_EQ(r.value.size(), oracle.size());
  for (const auto& it : r.value) EXPECT_EQ(int_of(it.value[0]), oracle.at(it.key));
  EXPECT_LE(r.metrics.rounds_used, 2 * (10 + tree.height()) + 2);
}

TEST(Convergecast, SingleVertex) {
  const auto g = WeightedGraph::from_edges(1, {});
  RoundEngine eng(g);
  const auto tree = build_bfs_tree(eng, 0).value;
  const auto r = convergecast_aggregate(eng, tree, {{{0, {word_of_int(9)}}}}, 1, kMax);
  EXPECT_EQ(r.metrics.rounds_used, 0);
  ASSERT_EQ(r.value.size(), 1u);
  EXPECT_EQ(int_of(r.value[0].value[0]), 9);
}

TEST(Convergecast, NonIdempotentRejected) {
  const auto g = path_graph(3);
  RoundEngine eng(g);
  const auto tree = build_bfs_tree(eng, 0).value;
  const MergeFn sum = [](std::span<Word> acc, std::span<const Word> in) {
    acc[0] = word_of_int(int_of(acc[0]) + int_of(in[0]));
  };
  std::vector<std::vector<KeyedItem>> items(3, std::vector<KeyedItem>{{0, {word_of_int(1)}}});
  try {
    convergecast_aggregate(eng, tree, items, 1, sum);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Contract);
  }
}

TEST(GlobalReduce, EveryoneLearnsTotal) {
  const auto g = random_graph(80, 0.1, 2);
  RoundEngine eng(g);
  const auto tree = build_bfs_tree(eng, 0).value;
  std::vector<std::vector<Word>> local(80);
  for (int v = 0; v < 80; ++v) local[static_cast<std::size_t>(v)] = {word_of_int((v * 37) % 101)};
  const auto r = global_reduce(eng, tree, local, kMax);
  std::int64_t expect = 0;
  for (int v = 0; v < 80; ++v) expect = std::max<std::int64_t>(expect, (v * 37) % 101);
  EXPECT_EQ(int_of(r.value[0]), expect);
}

TEST(KeyedConvergecast, AgentForestMultiplexing) {
  // Two agents on each vertex of a path: chain A runs 0<-1<-2, chain B runs 2<-1<-0.
  const auto g = path_graph(3);
  RoundEngine eng(g);
  const std::vector<NodeId> host{0, 1, 2, 0, 1, 2};
  const std::vector<std::int32_t> parent{-1, 0, 1, 4, 5, -1};
  AgentForest f(host, parent);
  f.validate(g);
  std::vector<std::vector<KeyedItem>> init(6);
  for (int a = 0; a < 6; ++a) init[static_cast<std::size_t>(a)].push_back({static_cast<Key>(a % 2), {word_of_int(a)}});
  const auto r = keyed_convergecast(eng, f, init, kMax);
  ASSERT_EQ(r.value[0].size(), 2u);
  EXPECT_EQ(int_of(r.value[0][0].value[0]), 2);
  EXPECT_EQ(int_of(r.value[0][1].value[0]), 1);
  EXPECT_EQ(int_of(r.value[5][0].value[0]), 4);
  EXPECT_EQ(int_of(r.value[5][1].value[0]), 5);
}

TEST(BellmanFord, MatchesDijkstra) {
  const auto g = random_graph(150, 0.05, 31);
  RoundEngine eng(g);
  const std::vector<NodeId> src{4};
  const auto r = bellman_ford(eng, src);
  const auto d = sssp_oracle(g, 4);
  for (int v = 0; v < 150; ++v) {
    EXPECT_DOUBLE_EQ(r.value.dist[static_cast<std::size_t>(v)], d[static_cast<std::size_t>(v)]);
    const NodeId p = r.value.parent[static_cast<std::size_t>(v)];
    if (v == 4) continue;
    ASSERT_NE(p, kNoNode);
    EXPECT_DOUBLE_EQ(r.value.dist[static_cast<std::size_t>(p)] + g.edge(r.value.parent_edge[static_cast<std::size_t>(v)]).w,
                     r.value.dist[static_cast<std::size_t>(v)]);
  }
}

TEST(BellmanFord, BoundedAndMultiSource) {
  const auto g = path_graph(10);
  RoundEngine eng(g);
  const std::vector<NodeId> src{0, 9};
  const auto r = bellman_ford(eng, src, {}, 3.0);
  EXPECT_DOUBLE_EQ(r.value.dist[3], 3.0);
  EXPECT_TRUE(std::isinf(r.value.dist[4]));
  EXPECT_DOUBLE_EQ(r.value.dist[6], 3.0);
  EXPECT_EQ(r.value.source[6], 9);
}
