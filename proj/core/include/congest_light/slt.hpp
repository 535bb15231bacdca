#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "congest_light/euler_tour.hpp"

namespace congest_light {

/// Approximate shortest-path tree from one root: d_G <= dist <= (1+eps) d_G.
struct ApproxSpt {
  NodeId root = 0;
  double eps = 0.0;
  ShortestPathForest forest;

  double dist(NodeId v) const { return forest.dist[static_cast<std::size_t>(v)]; }
  std::vector<EdgeId> edges() const;
  std::vector<char> edge_mask(std::size_t m) const;
};

/// Distributed Bellman-Ford (exact, so the eps contract holds trivially).
Run<ApproxSpt> approx_spt(RoundEngine& engine, NodeId root, double eps, std::span<const char> edge_mask = {});

struct BreakPoint {
  NodeId vertex = kNoNode;
  std::int64_t index = -1;
  double time = 0.0;
};

struct BreakPoints {
  std::int64_t spacing = 1;          // anchors sit at multiples of this index
  std::vector<BreakPoint> anchors;   // every appearance whose index is a multiple of spacing
  std::vector<BreakPoint> swept;     // chosen by the in-interval sweep
  std::vector<BreakPoint> filtered;  // anchors kept by the root's pass
  /// swept and filtered merged, ascending index.
  std::vector<BreakPoint> all() const;
  /// Vertices hosting at least one break point.
  std::vector<char> vertex_flags(int n) const;
};

/// Strict join rule: a point joins when its tour gap to the last kept point exceeds eps * dist.
Run<BreakPoints> select_breakpoints(RoundEngine& engine, const EulerTour& tour, const BfsTree& bfs,
                                    const FragmentDecomposition& mst, const ApproxSpt& spt, double eps);

struct HResult {
  std::vector<char> in_subtree_set;  // per vertex: its spt subtree holds a break point
  std::vector<char> edge_mask;       // MST plus spt parent edges of flagged vertices
};

Run<HResult> build_h(RoundEngine& engine, const FragmentDecomposition& mst, const FragmentDecomposition& spt_frags,
                     const BfsTree& bfs, const ApproxSpt& spt, const BreakPoints& bp);

struct SltStages {
  RoundMetrics fragments, tour, spt, breakpoints, h, final_tree;
  RoundMetrics total() const;
};

struct SltResult {
  NodeId root = 0;
  double eps = 0.0;           // requested stretch slack
  double eps_internal = 0.0;  // value driving the break point rule
  BreakPoints breakpoints;
  HResult h;
  std::vector<EdgeId> h_edges;
  ShortestPathForest tree;     // shortest-path tree of H
  std::vector<EdgeId> tree_edges;
  std::vector<EdgeId> mst_edges;
  SltStages stages;
};

/// Internal scaling between the requested eps and the break point parameter.
inline constexpr double kSltEpsDivisor = 51.0;

Run<SltResult> build_slt(RoundEngine& engine, NodeId root, double eps);

/// Lightness bound of the base construction at eps = 1: 1 + 4 * kSltEpsDivisor.
inline constexpr double kBaseLightness = 1.0 + 4.0 * kSltEpsDivisor;

struct TradeoffResult {
  SltResult base;        // run on the reweighted graph; edge ids coincide with the input graph
  double gamma = 0.0;
  double delta = 0.0;    // non-MST weights were divided by this
  std::vector<EdgeId> tree_edges;
};

/// Root-stretch bound of the tradeoff tree is 2 * kBaseLightness / gamma.
Run<TradeoffResult> lightness_tradeoff(RoundEngine& engine, NodeId root, double gamma);

}  // namespace congest_light
