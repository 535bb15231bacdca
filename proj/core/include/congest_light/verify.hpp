#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "congest_light/engine.hpp"
#include "congest_light/graph.hpp"

namespace congest_light {

enum class StretchMode { PerEdge, SampledPairs };

inline constexpr std::uint64_t kAuditSeed = 0x5eed'a0d1'7000'0001ULL;
inline constexpr std::int64_t kAuditSamples = 100000;

struct AuditOptions {
  StretchMode mode = StretchMode::PerEdge;
  std::int64_t samples = kAuditSamples;  // sampled-pair mode only
  std::uint64_t seed = kAuditSeed;
  int per_edge_cap = kDefaultApspCap;    // per-edge mode falls back to sampling above this n
};

/// Substitute subroutines whose round costs differ from the analyzed ones.
enum class Substitute { BellmanFordSpt, DominanceLeLists, BoundedSssp, BoruvkaFragments };

std::string substitute_name(Substitute s);
std::string substitute_note(Substitute s);

enum class Algorithm { Tour, Slt, Spanner, Net, Doubling };

/// Substitutes exercised by one algorithm's pipeline, in a fixed order.
std::vector<Substitute> substitutes_used(Algorithm a);

struct AuditReport {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  StretchMode mode = StretchMode::PerEdge;
  double max_stretch = kUnset;                 // the one the mode computed
  double max_stretch_edge = kUnset;            // per-edge mode
  double max_stretch_sampled = kUnset;         // sampled-pair mode
  std::int64_t pairs_checked = 0;
  std::pair<NodeId, NodeId> worst_pair{kNoNode, kNoNode};
  double weight = 0.0;                         // w(H)
  double mst_weight = 0.0;
  double lightness = kUnset;
  std::size_t edge_count = 0;
  double covering_radius = kUnset;             // filled by net audits
  double min_separation = kUnset;
  std::int64_t rounds = 0;
  std::int64_t messages = 0;
  std::int64_t budget_violations = 0;
  std::vector<std::string> deviations;
};

/// Stretch, lightness and size of the subgraph `h` (edge ids of `g`). Throws AuditFailure when `h`
/// does not connect every vertex.
AuditReport audit_spanner(const WeightedGraph& g, std::span<const EdgeId> h, const AuditOptions& opts = {});

/// Adds round metrics and the deviation list of `algo` to a report.
void attach_run(AuditReport& report, const RoundMetrics& metrics, Algorithm algo);

struct NetAudit {
  bool ok = false;
  double covering_radius = 0.0;
  NodeId farthest = kNoNode;        // vertex attaining the covering radius
  NodeId farthest_center = kNoNode; // its nearest net point
  double min_separation = std::numeric_limits<double>::infinity();
  std::pair<NodeId, NodeId> closest_pair{kNoNode, kNoNode};
  std::vector<NodeId> uncovered;                           // farther than cover_bound
  std::vector<std::pair<NodeId, NodeId>> close_pairs;      // at distance <= sep_bound
};

/// Passes when every vertex is within cover_bound of `net` and every two net points are farther
/// apart than sep_bound.
NetAudit audit_net(const WeightedGraph& g, std::span<const NodeId> net, double cover_bound, double sep_bound);

/// Stable JSON rendering; field names are fixed.
std::string report_to_json(const AuditReport& r);
std::string net_audit_to_json(const NetAudit& a);

}  // namespace congest_light
