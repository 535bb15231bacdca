#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "congest_light/euler_tour.hpp"

namespace congest_light {

/// Edge classes by weight relative to the tour length L = 2 w(MST).
struct EdgeBuckets {
  static constexpr int kLight = -1;     // w <= L/n
  static constexpr int kOverflow = -2;  // w > L
  double tour_length = 0.0;
  double eps = 0.0;
  int n = 0;
  int top = 0;                          // scales run over 0..top
  std::vector<int> bucket_of;           // per edge
  std::vector<EdgeId> light, overflow;
  std::vector<std::vector<EdgeId>> scales;

  /// Upper weight end of scale i: L / (1+eps)^i.
  double scale_weight(int i) const;
};

EdgeBuckets bucket_edges(const WeightedGraph& g, double tour_length, double eps);

/// Unweighted graph over cluster names 0..count-1 (sorted, duplicate-free adjacency).
struct ClusterGraph {
  std::int64_t count = 0;
  std::vector<std::vector<std::int64_t>> adj;
};

ClusterGraph cluster_graph(const WeightedGraph& g, std::span<const EdgeId> edges, std::span<const std::int64_t> cluster_of,
                           std::int64_t count);

/// Exponential radii with rate ln(count)/k, each resampled until below k.
std::vector<double> sample_radii(std::int64_t count, int k, std::uint64_t seed);

/**
 * Centralized reference protocol: k rounds in which every cluster adopts the best of its own
 * (source, value) and its neighbors' (source, value - 1), larger value first and smaller source on
 * ties. Afterwards each cluster keeps one edge per source heard with value >= final value - 1,
 * towards the neighbor that delivered the best value for that source (smaller name on ties).
 * Returns unordered cluster pairs (a < b), sorted.
 */
std::vector<std::pair<std::int64_t, std::int64_t>> shifted_radius_protocol(const ClusterGraph& cg, int k,
                                                                          std::span<const double> radii);

/// Two-phase cluster sampling spanner over the masked edges; (2k-1) stretch for every masked edge.
Run<std::vector<EdgeId>> baswana_sen(RoundEngine& engine, std::span<const char> edge_mask, int k, std::uint64_t seed);

struct ScaleResult {
  int scale = 0;
  int regime = 1;                 // 1: global simulation through the BFS tree, 2: tour intervals
  double scale_weight = 0.0;
  std::vector<EdgeId> edges;      // one representative per chosen cluster pair
  std::vector<std::pair<std::int64_t, std::int64_t>> cluster_edges;
  std::vector<std::int64_t> cluster_of;  // per vertex
  std::int64_t cluster_count = 0;        // names in use (regime 1: all names, regime 2: centers)
  std::vector<double> radii;             // regime 1 only, indexed by cluster name
  std::vector<std::int64_t> interval_parent;  // regime 2 only, per tour index (-1 at centers)
  int attempts = 1;
};

/// Scale below the boundary: the whole cluster graph is simulated through the BFS tree.
Run<ScaleResult> spanner_scale_case1(RoundEngine& engine, const EulerTour& tour, const BfsTree& bfs,
                                     const EdgeBuckets& buckets, int scale, int k, std::uint64_t seed);

/// Scale at or above the boundary: clusters are tour intervals started by centers.
Run<ScaleResult> spanner_scale_case2(RoundEngine& engine, const EulerTour& tour, const BfsTree& bfs,
                                     const EdgeBuckets& buckets, int scale, int k, std::uint64_t seed);

/// Scales strictly below this value use the first regime.
double case_boundary(int n, int k, double eps);

/// Internal eps = requested eps / this divisor, keeping it below 1/2.
inline constexpr double kSpannerEpsDivisor = 2.0;
/// Stretch bound slope relative to the requested eps: (2k-1)(1 + kStretchSlope * eps).
inline constexpr double kStretchSlope = 2.0;

struct SpannerStage {
  std::string name;
  RoundMetrics metrics;
  std::size_t edges = 0;
  int attempts = 1;
};

struct SpannerResult {
  int k = 2;
  double eps = 0.0;
  double eps_internal = 0.0;
  double tour_length = 0.0;
  std::vector<EdgeId> edges;        // final spanner, sorted
  std::vector<EdgeId> tree_edges;
  std::vector<EdgeId> light_edges;  // spanner of the light class
  std::vector<ScaleResult> scales;
  std::vector<SpannerStage> stages;
  EdgeBuckets buckets;
};

Run<SpannerResult> build_light_spanner(RoundEngine& engine, int k, double eps, NodeId root = 0);

}  // namespace congest_light
