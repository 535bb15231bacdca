#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "congest_light/nets.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace congest_light;
using namespace congest_light::testing;

namespace {

WeightedGraph complete_graph(int n) {
  std::vector<Edge> es;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) es.push_back({u, v, 1.0});
  return WeightedGraph::from_edges(n, es);
}

struct NetAudit {
  double covering = 0.0;
  double separation = std::numeric_limits<double>::infinity();
};

NetAudit audit(const DistanceMatrix& d, const std::vector<NodeId>& net) {
  NetAudit a;
  for (NodeId x = 0; x < d.n(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (NodeId y : net) best = std::min(best, d(x, y));
    a.covering = std::max(a.covering, best);
  }
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = i + 1; j < net.size(); ++j) a.separation = std::min(a.separation, d(net[i], net[j]));
  return a;
}

}  // namespace

// ----------------------------------------------------------------- lists

TEST(LeLists, SingleMember) {
  const auto g = path_graph(5);
  RoundEngine eng(g);
  const auto bfs = build_bfs_tree(eng, 0).value;
  std::vector<char> members(5, 0);
  members[2] = 1;
  const auto le = compute_le_lists(eng, bfs, members, 3, 0.0).value;
  EXPECT_EQ(le.lists[2], (std::vector<LeEntry>{{2, 0.0}}));
  EXPECT_EQ(le.lists[4], (std::vector<LeEntry>{{2, 2.0}}));
}

TEST(LeLists, PathHandUnrolled) {
  const auto g = path_graph(3);
  const std::vector<char> all(3, 1);
  std::uint64_t seed = 0;
  for (std::uint64_t s = 1; s < 1000; ++s)
    if (Permutation::from_seed(3, s).order(all) == std::vector<NodeId>{1, 0, 2}) {
      seed = s;
      break;
    }
  ASSERT_NE(seed, 0u);
  RoundEngine eng(g);
  const auto bfs = build_bfs_tree(eng, 0).value;
  const auto le = compute_le_lists(eng, bfs, all, seed, 0.0).value;
  EXPECT_EQ(le.lists[2], (std::vector<LeEntry>{{2, 0.0}, {1, 1.0}}));
  EXPECT_EQ(le.lists[1], (std::vector<LeEntry>{{1, 0.0}}));
}

TEST(LeLists, MatchBruteForce) {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto g = random_graph(500, 0.02, seed, true);
    const auto d = apsp_oracle(g);
    RoundEngine eng(g);
    const auto bfs = build_bfs_tree(eng, 0).value;
    std::vector<char> members(500, 1);
    if (seed == 2)
      for (std::size_t v = 0; v < 500; v += 3) members[v] = 0;
    const auto le = compute_le_lists(eng, bfs, members, 77 + seed, 0.1).value;
    std::size_t longest = 0;
    for (NodeId v = 0; v < 500; ++v) {
      const auto& l = le.lists[static_cast<std::size_t>(v)];
      ASSERT_EQ(l, oracle_le(d, le.perm, members, v)) << "vertex " << v;
      // Dominance along the list and the global minimum at its end.
      for (std::size_t i = 1; i < l.size(); ++i) {
        EXPECT_LT(l[i - 1].dist, l[i].dist);
        EXPECT_TRUE(le.perm.before(l[i].vertex, l[i - 1].vertex));
      }
      EXPECT_EQ(l.back().vertex, le.perm.order(members).front());
      longest = std::max(longest, l.size());
    }
    EXPECT_LE(static_cast<double>(longest), 4.0 * std::log2(500.0));
  }
}

// ------------------------------------------------------------- iteration

TEST(NetIteration, FarPairBothJoin) {
  const auto g = WeightedGraph::from_edges(2, {{0, 1, 10.0}}, {.normalize = false});
  RoundEngine eng(g);
  const auto bfs = build_bfs_tree(eng, 0).value;
  const auto st = net_iteration(eng, bfs, initial_net_state(2), 5.0, 0.1, 9).value;
  EXPECT_EQ(st.net, (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(st.active, (std::vector<char>{0, 0}));
}

TEST(NetIteration, CliqueAdmitsOrderMinimum) {
  const auto g = complete_graph(12);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RoundEngine eng(g);
    const auto bfs = build_bfs_tree(eng, 0).value;
    const auto st = net_iteration(eng, bfs, initial_net_state(12), 1.0, 0.1, seed).value;
    const std::vector<char> all(12, 1);
    ASSERT_EQ(st.net.size(), 1u);
    EXPECT_EQ(st.net[0], Permutation::from_seed(12, seed).order(all).front());
  }
}

TEST(NetIteration, JoinsMatchCentralizedRule) {
  const auto g = random_graph(500, 0.02, 5, true);
  const auto d = apsp_oracle(g);
  RoundEngine eng(g);
  const auto bfs = build_bfs_tree(eng, 0).value;
  NetState st = initial_net_state(500);
  const double radius = 60.0;
  for (int it = 0; it < 3 && std::count(st.active.begin(), st.active.end(), 1) > 0; ++it) {
    const auto before = st.active;
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(it);
    st = net_iteration(eng, bfs, std::move(st), radius, 0.1, seed).value;
    const auto perm = Permutation::from_seed(500, seed);
    std::vector<NodeId> expect;
    for (NodeId v = 0; v < 500; ++v) {
      if (!before[static_cast<std::size_t>(v)]) continue;
      bool first = true;
      for (NodeId u = 0; u < 500 && first; ++u)
        if (u != v && before[static_cast<std::size_t>(u)] && d(u, v) <= radius && perm.before(u, v)) first = false;
      if (first) expect.push_back(v);
    }
    EXPECT_EQ(st.log.back().joined, expect);
    for (std::size_t i = 0; i < expect.size(); ++i)
      for (std::size_t j = i + 1; j < expect.size(); ++j) EXPECT_GT(d(expect[i], expect[j]), radius);
  }
}

// ------------------------------------------------------------------ nets

TEST(Net, TinyRadiusTakesEverything) {
  const auto g = random_graph(60, 0.1, 3);
  RoundEngine eng(g);
  const auto r = construct_net(eng, 0.5, 0.1).value;
  EXPECT_EQ(r.net.size(), 60u);
}

TEST(Net, HugeRadiusStillCovers) {
  const auto g = random_graph(60, 0.1, 3);
  const auto d = apsp_oracle(g);
  double diam = 0;
  for (NodeId u = 0; u < 60; ++u)
    for (NodeId v = 0; v < 60; ++v) diam = std::max(diam, d(u, v));
  RoundEngine eng(g);
  const auto r = construct_net(eng, diam * 1.1, 0.1).value;
  EXPECT_EQ(r.net.size(), 1u);
  EXPECT_LE(audit(d, r.net).covering, 1.1 * diam * 1.1);
}

TEST(Net, PathOfSixtyFourEdges) {
  const auto g = path_graph(65);
  const auto d = apsp_oracle(g);
  const double radius = 4.0, delta = 0.1;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RoundEngine eng(g, {.seed = seed});
    const auto r = construct_net(eng, radius, delta).value;
    const auto a = audit(d, r.net);
    EXPECT_LE(a.covering, (1 + delta) * radius);
    EXPECT_GT(a.separation, radius / (1 + delta));
    EXPECT_GE(r.net.size(), static_cast<std::size_t>(std::ceil(64.0 / ((1 + delta) * 2 * radius))));
    EXPECT_LE(r.iterations, net_iteration_cap(65));
    for (const auto& l : r.log) EXPECT_FALSE(l.joined.empty());
  }
}

TEST(Net, RandomAudits) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = random_graph(200, 0.04, seed);
    const auto d = apsp_oracle(g);
    for (double radius : {5.0, 40.0, 150.0}) {
      RoundEngine eng(g, {.seed = seed});
      const double delta = 0.2;
      const auto r = construct_net(eng, radius, delta).value;
      const auto a = audit(d, r.net);
      EXPECT_LE(a.covering, (1 + delta) * radius + 1e-9);
      EXPECT_GT(a.separation, radius / (1 + delta));
    }
  }
}

TEST(Net, RejectsBadArguments) {
  const auto g = path_graph(4);
  RoundEngine eng(g);
  EXPECT_THROW(construct_net(eng, 0.0, 0.1), Error);
  EXPECT_THROW(construct_net(eng, 1.0, 1.0), Error);
}

TEST(Net, CapCarriesPartialState) {
  const auto g = path_graph(4);
  RoundEngine eng(g);
  const auto bfs = build_bfs_tree(eng, 0).value;
  NetState st = initial_net_state(4);
  st.iteration = net_iteration_cap(4);
  try {
    throw NetCapExceeded("cap", st);
  } catch (const NetCapExceeded& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
    EXPECT_EQ(e.partial().active.size(), 4u);
  }
}

// --------------------------------------------------------------- halving

TEST(Halving, NoClosePairsOneIteration) {
  std::vector<Edge> es;
  for (int i = 0; i + 1 < 10; ++i) es.push_back({i, i + 1, 5.0});
  const auto g = WeightedGraph::from_edges(10, es, {.normalize = false});
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto s = halving_experiment(g, 1.0, 0.1, seeds);
  EXPECT_EQ(s.max_iterations, 1);
  for (const auto& c : s.pairs) EXPECT_EQ(c.front(), 0);
}

TEST(Halving, CliqueDecays) {
  const auto g = complete_graph(50);
  std::vector<std::uint64_t> seeds(100);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  const auto s = halving_experiment(g, 1.0, 0.1, seeds);
  EXPECT_LE(s.pooled_ratio, 7.0 / 8.0);
  for (double r : s.ratio) EXPECT_LE(r, 7.0 / 8.0);
}

TEST(Halving, SparseInstanceDecays) {
  const auto g = random_graph(150, 0.05, 4);
  std::vector<std::uint64_t> seeds(100);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = 500 + i;
  const auto s = halving_experiment(g, 30.0, 0.1, seeds);
  EXPECT_LE(s.pooled_ratio, 7.0 / 8.0);
  EXPECT_LE(s.max_iterations, net_iteration_cap(150));
}

TEST(Halving, PathIterationsWithinCap) {
  const auto g = path_graph(64);
  std::vector<std::uint64_t> seeds(100);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = 7 + i;
  const auto s = halving_experiment(g, 3.0, 0.1, seeds);
  EXPECT_LE(s.max_iterations, net_iteration_cap(64));
  EXPECT_LE(s.pooled_ratio, 7.0 / 8.0);
}
