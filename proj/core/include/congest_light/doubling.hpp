#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "congest_light/nets.hpp"

namespace congest_light {

/// Distances from several sources at once, each exploration cut off at `bound`.
struct BoundedSssp {
  struct Label {
    NodeId source = kNoNode;
    double dist = 0.0;
    NodeId parent = kNoNode;  // kNoNode at the source
    EdgeId parent_edge = -1;
  };
  double bound = 0.0;
  std::vector<NodeId> sources;
  std::vector<std::vector<Label>> labels;  // per vertex, ascending source id
  std::int64_t max_load = 0;               // most sources reaching one vertex

  const Label* find(NodeId v, NodeId source) const;
};

/// Exact multi-source Bellman-Ford with a distance cutoff; messages carry (source, distance) pairs.
Run<BoundedSssp> bounded_multisource_sssp(RoundEngine& engine, std::span<const NodeId> sources, double bound);

/// Edges on the predecessor paths from every reached target back to its source. The marking walks
/// the paths in the engine (one token per source and edge).
Run<std::vector<EdgeId>> mark_paths(RoundEngine& engine, const BoundedSssp& sssp, std::span<const char> is_target);

struct DoublingScale {
  int index = 0;
  double delta = 0.0;                 // distance scale
  std::vector<NodeId> net;            // (2 eps delta, eps delta / 2)-net
  int net_iterations = 0;
  std::size_t pairs = 0;              // (source, target) pairs discovered
  std::vector<EdgeId> path_edges;     // union of marked paths at this scale
  std::size_t new_edges = 0;          // not present from earlier scales
  double added_weight = 0.0;          // weight of new_edges
  std::int64_t max_load = 0;
  RoundMetrics metrics;
};

struct DoublingOptions {
  NodeId root = 0;
  bool distributed_mst_weight = false;  // take L from the distributed tour instead of the oracle
  // A scale whose max_load exceeds load_multiple * eps_internal^-ddim is reported in warnings.
  double ddim = 2.0;
  double load_multiple = 1.0;
};

struct DoublingResult {
  double eps = 0.0;            // requested stretch slack
  double eps_internal = 0.0;   // eps / kDoublingEpsDivisor
  double mst_weight = 0.0;     // L
  double base_scale = 1.0;     // smallest edge weight; the ladder starts here
  std::vector<EdgeId> edges;   // sorted
  std::vector<DoublingScale> scales;
  std::vector<std::string> warnings;
};

/// Stretch 1 + c * eps_internal holds for c >= 30, so the requested eps is divided by 30.
inline constexpr double kDoublingEpsDivisor = 30.0;

/// Per-scale net parameters, in units of eps_internal * delta.
inline constexpr double kDoublingNetRadius = 4.0 / 3.0;
inline constexpr double kDoublingNetSlack = 0.5;

Run<DoublingResult> build_doubling_spanner(RoundEngine& engine, double eps, const DoublingOptions& opts = {});

/// Largest number of points of `points` inside any radius-`radius` ball centered at a vertex.
/// Throws AuditFailure when two points are closer than `separation`.
std::int64_t packing_audit(const DistanceMatrix& d, std::span<const NodeId> points, double radius, double separation);

/// |points| <= ceil(2 L / r) for an r-separated set in a graph whose MST weighs L.
bool net_cardinality_audit(double mst_weight, std::size_t points, double separation);

struct PsiEstimate {
  double alpha = 0.0;
  std::vector<int> exponents;           // i with nets at scale 2^i
  std::vector<std::int64_t> net_sizes;  // n_i
  double psi = 0.0;                     // sum_i n_i * alpha * 2^(i+1)
  RoundMetrics metrics;
};

/// Builds (alpha 2^i, 2^i)-nets upwards until one point remains, starting at the largest i with
/// alpha 2^i below the minimum edge weight (so the first net is the whole vertex set).
Run<PsiEstimate> mst_weight_estimator(RoundEngine& engine, double alpha, NodeId root = 0);

/// Upper sandwich constant asserted by the audits: psi <= kPsiConstant * alpha * log2(n) * L.
inline constexpr double kPsiConstant = 16.0;

}  // namespace congest_light
