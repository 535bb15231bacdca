#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "congest_light/error.hpp"
#include "congest_light/primitives.hpp"

namespace congest_light {

/// Shared random order: u precedes v when (hash(seed, u), u) < (hash(seed, v), v).
struct Permutation {
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> key;  // per vertex

  static Permutation from_seed(int n, std::uint64_t seed);
  bool before(NodeId u, NodeId v) const;
  /// Vertices of the mask in permutation order.
  std::vector<NodeId> order(std::span<const char> members) const;
};

struct LeEntry {
  NodeId vertex = kNoNode;
  double dist = 0.0;
  bool operator==(const LeEntry&) const = default;
};

/// Least-element lists: for each vertex, the members u such that no member at distance <= d(u, v)
/// precedes u. Ascending distance; each entry precedes all earlier ones.
struct LeLists {
  Permutation perm;
  double delta = 0.0;  // distance slack allowed by callers; distances here are exact
  std::vector<std::vector<LeEntry>> lists;  // per vertex (members and non-members alike)
};

/// Dominance-filtered Bellman-Ford over the whole graph from every member of `members`.
/// The BFS root broadcasts the seed.
Run<LeLists> compute_le_lists(RoundEngine& engine, const BfsTree& bfs, std::span<const char> members,
                              std::uint64_t seed, double delta);

struct NetIterationLog {
  std::uint64_t seed = 0;
  std::int64_t active_before = 0;
  std::vector<NodeId> joined;       // ascending id
  std::int64_t deactivated = 0;
  RoundMetrics metrics;
};

struct NetState {
  std::vector<char> active;         // per vertex
  std::vector<NodeId> net;          // ascending id
  int iteration = 0;
  ShortestPathForest last_tree;     // deactivation tree of the latest iteration
  std::vector<NetIterationLog> log;
};

NetState initial_net_state(int n);

/// One round of local-minimum admission and deactivation within (1 + delta) * radius of the new points.
Run<NetState> net_iteration(RoundEngine& engine, const BfsTree& bfs, NetState state, double radius, double delta,
                            std::uint64_t seed);

/// Iteration cap: ceil(kNetCapFactor * log2 n), at least 1.
inline constexpr double kNetCapFactor = 8.0;
int net_iteration_cap(int n);

class NetCapExceeded : public Error {
 public:
  NetCapExceeded(const std::string& what, NetState partial)
      : Error(ErrorKind::CapExceeded, what), partial_(std::move(partial)) {}
  const NetState& partial() const { return partial_; }

 private:
  NetState partial_;
};

struct NetResult {
  double radius = 0.0;
  double delta = 0.0;
  std::vector<NodeId> net;  // ascending id
  int iterations = 0;
  std::vector<NetIterationLog> log;
};

/// ((1 + delta) radius, radius / (1 + delta))-net of the whole vertex set.
Run<NetResult> construct_net(RoundEngine& engine, double radius, double delta, NodeId root = 0);

/// Same loop over an existing BFS tree. delta may be 0 here: distances are exact, so the result is a
/// (radius, radius)-net with strict separation. `salt` decorrelates the orders of repeated calls.
Run<NetResult> construct_net_on(RoundEngine& engine, const BfsTree& bfs, double radius, double delta,
                                std::uint64_t salt = 0);

struct HalvingStats {
  std::vector<std::vector<std::int64_t>> pairs;  // per seed, close active pairs before each iteration
  std::vector<double> ratio;                     // per iteration i >= 1: sum_s |E_i| / sum_s |E_{i-1}|
  double pooled_ratio = 0.0;                     // all transitions pooled
  int max_iterations = 0;
};

/// Runs the net loop for every seed and tracks the number of active pairs within `radius`.
HalvingStats halving_experiment(const WeightedGraph& g, double radius, double delta, std::span<const std::uint64_t> seeds);

}  // namespace congest_light
