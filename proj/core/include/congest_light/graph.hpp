#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "congest_light/error.hpp"

namespace congest_light {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

struct Edge {
  NodeId u;
  NodeId v;
  double w;
};

struct Incident {
  NodeId to;
  double w;
  EdgeId edge;
};

/// Total order on edges: (weight, smaller endpoint, larger endpoint).
bool edge_key_less(const Edge& a, const Edge& b);

struct GraphOptions {
  bool normalize = true;          // scale so the minimum weight is exactly 1
  bool require_connected = true;
  double poly_exponent = 4.0;     // max weight must stay <= n^poly_exponent; <= 0 disables
};

/** Immutable simple undirected weighted graph with CSR adjacency (sorted by neighbor id). */
class WeightedGraph {
 public:
  WeightedGraph() = default;

  static WeightedGraph from_edges(int n, std::vector<Edge> edges, const GraphOptions& opts = {});

  int n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::span<const Incident> adj(NodeId v) const {
    return {adj_.data() + offsets_[static_cast<std::size_t>(v)],
            adj_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
  }
  int degree(NodeId v) const { return static_cast<int>(adj(v).size()); }

  /// Edge id joining u and v, or -1.
  EdgeId find_edge(NodeId u, NodeId v) const;
  double total_weight() const;
  double scale_factor() const { return scale_; }  // original = stored * scale_factor
  bool connected() const;

  /// Same vertex set, only the listed edges; weights kept as-is.
  WeightedGraph subgraph(std::span<const EdgeId> keep) const;
  /// Same topology with weights replaced (no normalization, no cap).
  WeightedGraph reweighted(std::span<const double> weights) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incident> adj_;
  double scale_ = 1.0;
};

// ---------------------------------------------------------------- ingestion

WeightedGraph parse_graph(const std::string& text, const GraphOptions& opts = {});
WeightedGraph load_graph(const std::string& path, const GraphOptions& opts = {});
std::string to_edge_list(const WeightedGraph& g);

using Point = std::pair<double, double>;

/// One "x y" pair per line; '#' starts a comment line.
std::vector<Point> parse_points(const std::string& text);
std::string to_points_text(std::span<const Point> pts);
/// Euclidean edges between distinct points at distance <= radius.
std::vector<Edge> geometric_edges(std::span<const Point> pts, double radius);

// --------------------------------------------------------------- generators

enum class GenKind { RandomWeighted, UnitSquarePoints, Grid, Path, Star, RandomTree, Cycle };

GenKind parse_gen_kind(const std::string& name);

struct GenParams {
  int n = 16;
  double p = 0.1;              // edge probability (random_weighted)
  double radius = 0.2;         // connection radius (unit_square_points)
  int rows = 0, cols = 0;      // grid; 0 means square-ish from n
  double w_min = 1.0, w_max = 0.0;  // w_max <= 0 means n
  bool unit_weights = false;
  bool integer_weights = false;  // draws from {w_min..w_max}; one edge pinned to w_min
  double poly_exponent = 4.0;
};

struct Instance {
  WeightedGraph graph;
  std::vector<Point> points;                      // only for unit_square_points
  int ddim = -1;                                  // known doubling dimension label, -1 unknown
};

Instance generate(GenKind kind, const GenParams& params, std::uint64_t seed);

// ------------------------------------------------------------------ oracles

struct MstResult {
  std::vector<EdgeId> edges;       // sorted ascending
  double weight = 0.0;
  NodeId root = 0;
  std::vector<NodeId> parent;      // kNoNode at root
  std::vector<EdgeId> parent_edge; // -1 at root
};

MstResult mst_oracle(const WeightedGraph& g, NodeId root = 0);

/// Dijkstra; +inf for unreachable vertices.
std::vector<double> sssp_oracle(const WeightedGraph& g, NodeId source);
std::vector<double> multi_source_oracle(const WeightedGraph& g, std::span<const NodeId> sources);

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(int n, std::vector<double> d) : n_(n), d_(std::move(d)) {}
  int n() const { return n_; }
  double operator()(NodeId u, NodeId v) const {
    return d_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)];
  }
  std::span<const double> row(NodeId u) const {
    return {d_.data() + static_cast<std::size_t>(u) * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

inline constexpr int kDefaultApspCap = 4096;

DistanceMatrix apsp_oracle(const WeightedGraph& g, int cap = kDefaultApspCap);

/// Hop distances from a source (BFS ignoring weights); -1 unreachable.
std::vector<int> hop_distances(const WeightedGraph& g, NodeId source);

/// Distances from `source` inside the subgraph formed by `tree_edges`.
std::vector<double> tree_distances(const WeightedGraph& g, std::span<const EdgeId> tree_edges, NodeId source);

}  // namespace congest_light
