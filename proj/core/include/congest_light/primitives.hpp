#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "congest_light/engine.hpp"

namespace congest_light {

/// A value produced by a distributed stage together with the rounds it cost.
template <class T>
struct Run {
  T value;
  RoundMetrics metrics;
};

struct BfsTree {
  NodeId root = 0;
  std::vector<NodeId> parent;  // kNoNode at root
  std::vector<int> depth;
  std::vector<std::vector<NodeId>> children;  // ascending ids
  int height() const;
};

Run<BfsTree> build_bfs_tree(RoundEngine& engine, NodeId root);

/**
 * Rooted forest whose nodes ("agents") are hosted by graph vertices. A vertex may host several
 * agents; the parent of an agent must live on a neighboring vertex. When every agent is its own
 * vertex the engine messages go untagged.
 */
class AgentForest {
 public:
  AgentForest() = default;
  AgentForest(std::vector<NodeId> host, std::vector<std::int32_t> parent);
  /// Agent i is vertex i.
  static AgentForest of_vertices(std::span<const NodeId> parent);

  std::size_t size() const { return host_.size(); }
  NodeId host(std::int32_t a) const { return host_[static_cast<std::size_t>(a)]; }
  std::int32_t parent(std::int32_t a) const { return parent_[static_cast<std::size_t>(a)]; }
  std::span<const std::int32_t> children(std::int32_t a) const { return children_[static_cast<std::size_t>(a)]; }
  std::span<const std::int32_t> agents_of(NodeId v) const {
    if (static_cast<std::size_t>(v) >= agents_of_.size()) return {};
    return agents_of_[static_cast<std::size_t>(v)];
  }
  bool vertex_agents() const { return vertex_agents_; }
  AgentTag tag_for(std::int32_t a) const { return vertex_agents_ ? kNoAgent : a; }
  std::int32_t resolve(NodeId receiver, AgentTag tag) const { return vertex_agents_ ? receiver : tag; }
  void validate(const WeightedGraph& g) const;

 private:
  std::vector<NodeId> host_;
  std::vector<std::int32_t> parent_;
  std::vector<std::vector<std::int32_t>> children_;
  std::vector<std::vector<std::int32_t>> agents_of_;
  bool vertex_agents_ = false;
};

using Key = std::uint64_t;

/// In-place merge of an incoming value into an accumulator; must be associative and commutative.
using MergeFn = std::function<void(std::span<Word> acc, std::span<const Word> in)>;

struct KeyedItem {
  Key key;
  std::vector<Word> value;
};

/**
 * Pipelined convergecast: every agent starts with (key, value) items; each agent forwards one item
 * per round to its parent in increasing key order, merging equal keys. Roots end with the merged
 * items of their whole tree. Result is indexed by agent (non-roots end empty).
 */
Run<std::vector<std::vector<KeyedItem>>> keyed_convergecast(RoundEngine& engine, const AgentForest& forest,
                                                            std::vector<std::vector<KeyedItem>> initial,
                                                            const MergeFn& merge);

/// Pipelined broadcast of each root's item list down its tree; every agent receives the list in order.
Run<std::vector<std::vector<std::vector<Word>>>> forest_broadcast(RoundEngine& engine, const AgentForest& forest,
                                                                  std::vector<std::vector<std::vector<Word>>> at_roots);

using ChildValues = std::span<const std::pair<std::int32_t, std::vector<Word>>>;
using UpFn = std::function<std::vector<Word>(std::int32_t agent, ChildValues from_children)>;

/// Bottom-up aggregation: each agent computes its value once all children reported, then sends it up.
Run<std::vector<std::vector<Word>>> forest_upcast(RoundEngine& engine, const AgentForest& forest, const UpFn& fn);

using DownFn =
    std::function<std::vector<std::pair<std::int32_t, std::vector<Word>>>(std::int32_t agent, std::span<const Word> from_parent)>;

/// Top-down: roots start (empty input); each agent maps its parent's value to per-child values.
RoundMetrics forest_downcast(RoundEngine& engine, const AgentForest& forest, const DownFn& fn);

struct BroadcastItem {
  NodeId origin;
  std::vector<Word> payload;
};

/// Every vertex learns all items (upcast to the BFS root, then downcast), O(M + D) rounds.
Run<std::vector<std::vector<BroadcastItem>>> pipeline_broadcast(RoundEngine& engine, const BfsTree& tree,
                                                                const std::vector<BroadcastItem>& items);

/**
 * Per-key aggregation toward the BFS root. The merge must be idempotent (checked on the supplied
 * values at construction), since it models "forward only the best value per key".
 */
Run<std::vector<KeyedItem>> convergecast_aggregate(RoundEngine& engine, const BfsTree& tree,
                                                   std::vector<std::vector<KeyedItem>> per_vertex,
                                                   std::size_t key_space_size, const MergeFn& merge);

/// Aggregate over the whole graph via the BFS tree (upcast then downcast); 2*height rounds.
Run<std::vector<Word>> global_reduce(RoundEngine& engine, const BfsTree& tree, std::vector<std::vector<Word>> local,
                                     const MergeFn& merge);

using SendStep = std::function<void(Context&)>;

/// One synchronous exchange: every vertex runs `send`, then every vertex runs `receive` on its inbox.
RoundMetrics neighbor_exchange(RoundEngine& engine, const SendStep& send, const SendStep& receive);

struct ShortestPathForest {
  std::vector<double> dist;        // +inf when unreached
  std::vector<NodeId> parent;      // kNoNode for sources and unreached
  std::vector<EdgeId> parent_edge;
  std::vector<NodeId> source;      // nearest source, kNoNode when unreached
};

/**
 * Distributed Bellman-Ford from a set of sources (distance 0), over the edges with mask[e] != 0
 * (all edges when mask is empty). Vertices never adopt distances above `bound`. Exact at quiescence.
 */
Run<ShortestPathForest> bellman_ford(RoundEngine& engine, std::span<const NodeId> sources,
                                     std::span<const char> edge_mask = {},
                                     double bound = std::numeric_limits<double>::infinity());

}  // namespace congest_light
