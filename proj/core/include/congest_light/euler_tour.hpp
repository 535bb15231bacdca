#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "congest_light/mst_fragments.hpp"

namespace congest_light {

/// One visit of the tour: the vertex, its position in the tour, and the weighted visit time.
struct Appearance {
  NodeId vertex = kNoNode;
  std::int64_t index = -1;
  double time = 0.0;
};

struct TourLengths {
  std::vector<double> local;           // per vertex: tour length of its subtree inside its fragment
  std::vector<double> global;          // per vertex: tour length of its whole subtree
  std::vector<double> fragment_total;  // per fragment: global length at its root
};

/**
 * Preorder traversal of a rooted spanning tree, children visited in ascending id. Appearance lists
 * per vertex are sorted by index; the root appears deg+1 times, every other vertex deg times.
 */
struct EulerTour {
  NodeId root = 0;
  std::vector<std::vector<Appearance>> appearances;
  std::vector<double> start;   // first visit time per vertex
  std::vector<double> extent;  // tour length of the subtree below each vertex
  double length = 0.0;

  std::size_t size() const;
  /// All appearances ordered by index.
  std::vector<Appearance> sequence() const;
};

/// Per-edge weight override for the traversal; empty means the graph weights.
using TourWeights = std::span<const double>;

Run<std::vector<double>> local_tour_lengths(RoundEngine& engine, const FragmentDecomposition& frags,
                                            TourWeights weights = {});

/// Broadcasts the fragment roots' local lengths; every vertex then knows every fragment total.
Run<TourLengths> global_tour_lengths(RoundEngine& engine, const FragmentDecomposition& frags, const BfsTree& bfs,
                                     std::vector<double> local, TourWeights weights = {});

/// Interval assignment inside fragments, then fragment shifts computed at the root and broadcast.
/// Appearance indices are left at -1; see unweighted_indices.
Run<EulerTour> dfs_intervals(RoundEngine& engine, const FragmentDecomposition& frags, const BfsTree& bfs,
                             const TourLengths& lengths, TourWeights weights = {});

/// The same pipeline with every weight equal to 1; visit times are then tour positions.
Run<EulerTour> unweighted_indices(RoundEngine& engine, const FragmentDecomposition& frags, const BfsTree& bfs);

/// Full pipeline on the MST: fragments, BFS tree, weighted times and tour indices.
Run<EulerTour> compute_euler_tour(RoundEngine& engine, NodeId root);

/// Same as compute_euler_tour, reusing an existing decomposition and BFS tree.
Run<EulerTour> euler_tour_from(RoundEngine& engine, const FragmentDecomposition& frags, const BfsTree& bfs);

std::string tour_to_json(const EulerTour& tour);

}  // namespace congest_light
