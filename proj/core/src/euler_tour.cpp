#include "congest_light/euler_tour.hpp"

#include <algorithm>

#include "json.hpp"

namespace congest_light {

std::size_t EulerTour::size() const {
  std::size_t s = 0;
  for (const auto& a : appearances) s += a.size();
  return s;
}

std::vector<Appearance> EulerTour::sequence() const {
  std::vector<Appearance> all;
  all.reserve(size());
  for (const auto& a : appearances) all.insert(all.end(), a.begin(), a.end());
  std::sort(all.begin(), all.end(), [](const Appearance& x, const Appearance& y) { return x.index < y.index; });
  return all;
}

namespace {

struct TreeView {
  const WeightedGraph& g;
  const FragmentDecomposition& f;
  TourWeights weights;
  std::vector<std::vector<NodeId>> children;

  TreeView(const WeightedGraph& graph, const FragmentDecomposition& frags, TourWeights w)
      : g(graph), f(frags), weights(w), children(frags.children()) {
    if (!weights.empty() && weights.size() != g.m())
      throw Error(ErrorKind::InvalidArgument, "tour weights must have one entry per edge");
  }
  double up_weight(NodeId child) const {
    const EdgeId e = f.parent_edge[static_cast<std::size_t>(child)];
    return weights.empty() ? g.edge(e).w : weights[static_cast<std::size_t>(e)];
  }
  bool internal(NodeId child) const {
    return f.fragment_of[static_cast<std::size_t>(child)] ==
           f.fragment_of[static_cast<std::size_t>(f.parent[static_cast<std::size_t>(child)])];
  }
};

double child_value(ChildValues ch, NodeId z) {
  for (const auto& [c, w] : ch)
    if (c == z) return real_of(w[0]);
  throw Error(ErrorKind::Contract, "missing child report");
}

}  // namespace

Run<std::vector<double>> local_tour_lengths(RoundEngine& engine, const FragmentDecomposition& frags,
                                            TourWeights weights) {
  const TreeView tv(engine.graph(), frags, weights);
  const auto forest = AgentForest::of_vertices(frags.fragment_parent());
  auto up = forest_upcast(engine, forest, [&](std::int32_t a, ChildValues ch) {
    double len = 0.0;
    for (NodeId z : tv.children[static_cast<std::size_t>(a)])
      if (tv.internal(z)) len += child_value(ch, z) + 2.0 * tv.up_weight(z);
    return std::vector<Word>{word_of(len)};
  });
  std::vector<double> out(up.value.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = real_of(up.value[v][0]);
  return {std::move(out), up.metrics};
}

Run<TourLengths> global_tour_lengths(RoundEngine& engine, const FragmentDecomposition& frags, const BfsTree& bfs,
                                     std::vector<double> local, TourWeights weights) {
  const TreeView tv(engine.graph(), frags, weights);
  RoundMetrics metrics;
  const std::size_t k = frags.count();

  std::vector<BroadcastItem> items;
  for (std::size_t i = 0; i < k; ++i) {
    const NodeId r = frags.fragment_root[i];
    items.push_back({r, {word_of_int(static_cast<std::int64_t>(i)), word_of(local[static_cast<std::size_t>(r)])}});
  }
  auto bc = pipeline_broadcast(engine, bfs, items);
  metrics += bc.metrics;

  // Every vertex holds the same list; fragment totals follow locally from the fragment tree.
  std::vector<double> root_local(k, 0.0);
  for (const auto& it : bc.value[static_cast<std::size_t>(bfs.root)])
    root_local[static_cast<std::size_t>(int_of(it.payload[0]))] = real_of(it.payload[1]);
  std::vector<std::vector<std::size_t>> fchildren(k);
  for (std::size_t i = 1; i < k; ++i) fchildren[static_cast<std::size_t>(frags.parent_fragment[i])].push_back(i);
  std::vector<std::size_t> order{0};
  for (std::size_t q = 0; q < order.size(); ++q)
    for (auto c : fchildren[order[q]]) order.push_back(c);
  std::vector<double> total(k, 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    // Children of a fragment are summed in ascending order of their root id.
    auto kids = fchildren[*it];
    std::sort(kids.begin(), kids.end(), [&](std::size_t a, std::size_t b) {
      return frags.fragment_root[a] < frags.fragment_root[b];
    });
    double t = root_local[*it];
    for (auto c : kids) t += total[c] + 2.0 * tv.up_weight(frags.fragment_root[c]);
    total[*it] = t;
  }

  const auto forest = AgentForest::of_vertices(frags.fragment_parent());
  auto up = forest_upcast(engine, forest, [&](std::int32_t a, ChildValues ch) {
    double len = 0.0;
    for (NodeId z : tv.children[static_cast<std::size_t>(a)]) {
      const double sub = tv.internal(z) ? child_value(ch, z)
                                        : total[static_cast<std::size_t>(frags.fragment_of[static_cast<std::size_t>(z)])];
      len += sub + 2.0 * tv.up_weight(z);
    }
    return std::vector<Word>{word_of(len)};
  });
  metrics += up.metrics;

  TourLengths out;
  out.local = std::move(local);
  out.global.resize(up.value.size());
  for (std::size_t v = 0; v < out.global.size(); ++v) out.global[v] = real_of(up.value[v][0]);
  out.fragment_total = std::move(total);
  return {std::move(out), metrics};
}

Run<EulerTour> dfs_intervals(RoundEngine& engine, const FragmentDecomposition& frags, const BfsTree& bfs,
                             const TourLengths& lengths, TourWeights weights) {
  const TreeView tv(engine.graph(), frags, weights);
  const int n = engine.graph().n();
  const std::size_t k = frags.count();
  RoundMetrics metrics;

  // Relative start times inside each fragment; fragment roots start at 0 in their own frame and
  // never forward an assignment across an external edge.
  std::vector<double> rel(static_cast<std::size_t>(n), 0.0);
  std::vector<BroadcastItem> pairs;
  const auto forest = AgentForest::of_vertices(frags.fragment_parent());
  metrics += forest_downcast(engine, forest, [&](std::int32_t a, std::span<const Word> in) {
    const double mine = in.empty() ? 0.0 : real_of(in[0]);
    rel[static_cast<std::size_t>(a)] = mine;
    std::vector<std::pair<std::int32_t, std::vector<Word>>> outs;
    double t = mine;
    for (NodeId z : tv.children[static_cast<std::size_t>(a)]) {
      const double w = tv.up_weight(z);
      t += w;
      if (tv.internal(z))
        outs.push_back({z, {word_of(t)}});
      else
        pairs.push_back({a, {word_of_int(frags.fragment_of[static_cast<std::size_t>(z)]), word_of(t)}});
      t += lengths.global[static_cast<std::size_t>(z)] + w;
    }
    return outs;
  });

  auto bc = pipeline_broadcast(engine, bfs, pairs);
  metrics += bc.metrics;

  // The root turns the pairs into absolute shifts, walking the fragment tree from fragment 0.
  std::vector<double> offset(k, 0.0);
  for (const auto& it : bc.value[static_cast<std::size_t>(bfs.root)])
    offset[static_cast<std::size_t>(int_of(it.payload[0]))] = real_of(it.payload[1]);
  std::vector<std::vector<std::size_t>> fchildren(k);
  for (std::size_t i = 1; i < k; ++i) fchildren[static_cast<std::size_t>(frags.parent_fragment[i])].push_back(i);
  std::vector<double> shift(k, 0.0);
  std::vector<std::size_t> order{0};
  for (std::size_t q = 0; q < order.size(); ++q)
    for (auto c : fchildren[order[q]]) {
      shift[c] = shift[order[q]] + offset[c];
      order.push_back(c);
    }
  std::vector<BroadcastItem> shifts;
  for (std::size_t i = 1; i < k; ++i)
    shifts.push_back({bfs.root, {word_of_int(static_cast<std::int64_t>(i)), word_of(shift[i])}});
  auto bc2 = pipeline_broadcast(engine, bfs, shifts);
  metrics += bc2.metrics;

  std::vector<double> known_shift(k, 0.0);
  for (const auto& it : bc2.value[static_cast<std::size_t>(bfs.root)])
    known_shift[static_cast<std::size_t>(int_of(it.payload[0]))] = real_of(it.payload[1]);

  EulerTour tour;
  tour.root = frags.root;
  tour.appearances.resize(static_cast<std::size_t>(n));
  tour.start.resize(static_cast<std::size_t>(n));
  tour.extent = lengths.global;
  tour.length = lengths.global[static_cast<std::size_t>(frags.root)];
  for (NodeId v = 0; v < n; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    const double a = known_shift[static_cast<std::size_t>(frags.fragment_of[vi])] + rel[vi];
    tour.start[vi] = a;
    auto& app = tour.appearances[vi];
    app.push_back({v, -1, a});
    double t = a;
    for (NodeId z : tv.children[vi]) {
      const double w = tv.up_weight(z);
      t += w;
      t += lengths.global[static_cast<std::size_t>(z)] + w;
      app.push_back({v, -1, t});
    }
  }
  return {std::move(tour), metrics};
}

Run<EulerTour> unweighted_indices(RoundEngine& engine, const FragmentDecomposition& frags, const BfsTree& bfs) {
  const std::vector<double> ones(engine.graph().m(), 1.0);
  RoundMetrics metrics;
  auto local = local_tour_lengths(engine, frags, ones);
  metrics += local.metrics;
  auto lengths = global_tour_lengths(engine, frags, bfs, std::move(local.value), ones);
  metrics += lengths.metrics;
  auto tour = dfs_intervals(engine, frags, bfs, lengths.value, ones);
  metrics += tour.metrics;
  for (auto& app : tour.value.appearances)
    for (auto& x : app) x.index = static_cast<std::int64_t>(x.time);
  return {std::move(tour.value), metrics};
}

Run<EulerTour> euler_tour_from(RoundEngine& engine, const FragmentDecomposition& frags, const BfsTree& bfs) {
  RoundMetrics metrics;
  auto local = local_tour_lengths(engine, frags);
  metrics += local.metrics;
  auto lengths = global_tour_lengths(engine, frags, bfs, std::move(local.value));
  metrics += lengths.metrics;
  auto tour = dfs_intervals(engine, frags, bfs, lengths.value);
  metrics += tour.metrics;
  auto idx = unweighted_indices(engine, frags, bfs);
  metrics += idx.metrics;
  for (std::size_t v = 0; v < tour.value.appearances.size(); ++v)
    for (std::size_t j = 0; j < tour.value.appearances[v].size(); ++j)
      tour.value.appearances[v][j].index = idx.value.appearances[v][j].index;
  return {std::move(tour.value), metrics};
}

Run<EulerTour> compute_euler_tour(RoundEngine& engine, NodeId root) {
  RoundMetrics metrics;
  auto frags = compute_fragments(engine, root);
  metrics += frags.metrics;
  auto bfs = build_bfs_tree(engine, root);
  metrics += bfs.metrics;
  auto tour = euler_tour_from(engine, frags.value, bfs.value);
  metrics += tour.metrics;
  return {std::move(tour.value), metrics};
}

std::string tour_to_json(const EulerTour& tour) {
  nlohmann::json j;
  j["root"] = tour.root;
  j["length"] = tour.length;
  auto& seq = j["sequence"];
  seq = nlohmann::json::array();
  for (const auto& a : tour.sequence()) seq.push_back({{"vertex", a.vertex}, {"index", a.index}, {"time", a.time}});
  return j.dump();
}

}  // namespace congest_light
