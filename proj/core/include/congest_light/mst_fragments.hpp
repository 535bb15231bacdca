#pragma once

#include <span>
#include <string>
#include <vector>

#include "congest_light/primitives.hpp"

namespace congest_light {

/**
 * The MST split into vertex-disjoint subtrees ("fragments") plus the tree edges joining them.
 * Fragment 0 contains the root and is rooted there; every other fragment is rooted at its endpoint
 * of the edge to its parent fragment.
 */
struct FragmentDecomposition {
  NodeId root = 0;
  std::vector<std::int32_t> fragment_of;       // per vertex
  std::vector<NodeId> fragment_root;           // per fragment
  std::vector<std::int32_t> parent_fragment;   // per fragment, -1 for fragment 0
  std::vector<EdgeId> fragment_parent_edge;    // per fragment, -1 for fragment 0
  std::vector<NodeId> parent;                  // whole tree rooted at `root`
  std::vector<EdgeId> parent_edge;
  std::vector<EdgeId> internal_edges;          // sorted
  std::vector<EdgeId> external_edges;          // sorted

  std::size_t count() const { return fragment_root.size(); }
  std::vector<EdgeId> tree_edges() const;
  /// Children in the whole tree, ascending id.
  std::vector<std::vector<NodeId>> children() const;
  /// Parent pointers restricted to fragments (kNoNode at each fragment root).
  std::vector<NodeId> fragment_parent() const;
};

struct FragmentOptions {
  /// Target fragment size; 0 means ceil(sqrt(n)).
  int size_target = 0;
};

/**
 * Two-phase distributed MST. Phase 1 grows fragments Boruvka-style until each holds at least
 * `size_target` vertices, then cuts subtrees whose height reaches the target. Phase 2 pipelines the
 * inter-fragment edges up a BFS tree with cycle filtering; the root finishes the MST and broadcasts
 * the fragment tree. With a mask, only masked edges are tree candidates (a spanning tree mask yields
 * fragments of that tree); communication always uses the full graph.
 */
Run<FragmentDecomposition> compute_fragments(RoundEngine& engine, NodeId root, std::span<const char> tree_mask = {},
                                             const FragmentOptions& opts = {});

std::string fragments_to_json(const FragmentDecomposition& f);

}  // namespace congest_light
