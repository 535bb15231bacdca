#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "congest_light/graph.hpp"

namespace congest_light::testing {

inline WeightedGraph path_graph(int n, double w = 1.0) {
  std::vector<Edge> es;
  for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1, w});
  return WeightedGraph::from_edges(n, es);
}

inline WeightedGraph star_graph(int n) {
  std::vector<Edge> es;
  for (int i = 1; i < n; ++i) es.push_back({0, i, 1.0});
  return WeightedGraph::from_edges(n, es);
}

inline WeightedGraph random_graph(int n, double p, std::uint64_t seed, bool integer_weights = false) {
  GenParams gp;
  gp.n = n;
  gp.p = p;
  gp.integer_weights = integer_weights;
  return generate(GenKind::RandomWeighted, gp, seed).graph;
}

inline WeightedGraph random_tree(int n, std::uint64_t seed, bool integer_weights = true) {
  GenParams gp;
  gp.n = n;
  gp.integer_weights = integer_weights;
  return generate(GenKind::RandomTree, gp, seed).graph;
}

/// Unit-weight random tree plus heavy integer chords in [2, 2n]; the chords land in the upper scales.
inline WeightedGraph chorded_tree(int n, int chords, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> es;
  std::set<std::pair<int, int>> used;
  for (int v = 1; v < n; ++v) {
    const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
    es.push_back({p, v, 1.0});
    used.insert({p, v});
  }
  std::uniform_int_distribution<int> pick(0, n - 1), weight(2, 2 * n);
  for (int c = 0; c < chords;) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!used.insert({a, b}).second) continue;
    es.push_back({a, b, static_cast<double>(weight(rng))});
    ++c;
  }
  return WeightedGraph::from_edges(n, es, {.normalize = false});
}

inline bool same_sorted(std::vector<EdgeId> a, std::vector<EdgeId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace congest_light::testing
