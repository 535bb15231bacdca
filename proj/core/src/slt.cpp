#include "congest_light/slt.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace congest_light {

std::vector<EdgeId> ApproxSpt::edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e : forest.parent_edge)
    if (e >= 0) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<char> ApproxSpt::edge_mask(std::size_t m) const {
  std::vector<char> mask(m, 0);
  for (EdgeId e : forest.parent_edge)
    if (e >= 0) mask[static_cast<std::size_t>(e)] = 1;
  return mask;
}

Run<ApproxSpt> approx_spt(RoundEngine& engine, NodeId root, double eps, std::span<const char> edge_mask) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::InvalidArgument, "approx_spt: eps must lie in (0, 1]");
  const std::vector<NodeId> src{root};
  auto bf = bellman_ford(engine, src, edge_mask);
  for (double d : bf.value.dist)
    if (std::isinf(d)) throw Error(ErrorKind::Disconnected, "approx_spt: root does not reach every vertex");
  return {ApproxSpt{root, eps, std::move(bf.value)}, bf.metrics};
}

std::vector<BreakPoint> BreakPoints::all() const {
  std::vector<BreakPoint> out = swept;
  out.insert(out.end(), filtered.begin(), filtered.end());
  std::sort(out.begin(), out.end(), [](const BreakPoint& a, const BreakPoint& b) { return a.index < b.index; });
  return out;
}

std::vector<char> BreakPoints::vertex_flags(int n) const {
  std::vector<char> f(static_cast<std::size_t>(n), 0);
  for (const auto& b : all()) f[static_cast<std::size_t>(b.vertex)] = 1;
  return f;
}

namespace {

/// Carries the time of the last kept point along consecutive appearances of one interval.
struct SweepNode {
  std::vector<Appearance> apps;
  std::vector<NodeId> children;
  NodeId parent = kNoNode;
  double dist = 0.0;
  double eps = 0.0;
  std::int64_t spacing = 1;
  std::int64_t total = 0;
  std::vector<char> joined;

  NodeId next_host(std::size_t p) const { return p < children.size() ? children[p] : parent; }
  void forward(Context& c, std::size_t p, double last) {
    const std::int64_t next = apps[p].index + 1;
    if (next >= total || next % spacing == 0) return;
    c.send(next_host(p), {word_of(last)}, static_cast<AgentTag>(next));
  }
  void step(Context& c) {
    if (c.round() == 0) {
      for (std::size_t p = 0; p < apps.size(); ++p)
        if (apps[p].index % spacing == 0) forward(c, p, apps[p].time);
      return;
    }
    for (const auto& m : c.inbox()) {
      std::size_t p = 0;
      while (apps[p].index != m.agent) ++p;
      double last = real_of(m.words[0]);
      if (apps[p].time - last > eps * dist) {
        joined[p] = 1;
        last = apps[p].time;
      }
      forward(c, p, last);
    }
  }
  bool done() const { return true; }
};

}  // namespace

Run<BreakPoints> select_breakpoints(RoundEngine& engine, const EulerTour& tour, const BfsTree& bfs,
                                    const FragmentDecomposition& mst, const ApproxSpt& spt, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "select_breakpoints: eps must be positive");
  const int n = engine.graph().n();
  RoundMetrics metrics;
  BreakPoints bp;
  bp.spacing = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
  const auto total = static_cast<std::int64_t>(tour.size());
  const auto children = mst.children();

  std::vector<SweepNode> progs(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) {
    auto& p = progs[static_cast<std::size_t>(v)];
    p.apps = tour.appearances[static_cast<std::size_t>(v)];
    p.children = children[static_cast<std::size_t>(v)];
    p.parent = mst.parent[static_cast<std::size_t>(v)];
    p.dist = spt.dist(v);
    p.eps = eps;
    p.spacing = bp.spacing;
    p.total = total;
    p.joined.assign(p.apps.size(), 0);
  }
  metrics += engine.run(progs);

  std::vector<BroadcastItem> anchor_items;
  for (NodeId v = 0; v < n; ++v) {
    const auto& p = progs[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < p.apps.size(); ++i) {
      const auto& a = p.apps[i];
      if (p.joined[i]) bp.swept.push_back({v, a.index, a.time});
      if (a.index % bp.spacing == 0) {
        bp.anchors.push_back({v, a.index, a.time});
        anchor_items.push_back({v, {word_of_int(a.index), word_of(a.time), word_of(p.dist)}});
      }
    }
  }
  auto by_index = [](const BreakPoint& a, const BreakPoint& b) { return a.index < b.index; };
  std::sort(bp.swept.begin(), bp.swept.end(), by_index);
  std::sort(bp.anchors.begin(), bp.anchors.end(), by_index);

  auto bc = pipeline_broadcast(engine, bfs, anchor_items);
  metrics += bc.metrics;

  // Root-side pass over the anchors, starting from the first tour point.
  struct AnchorInfo {
    std::int64_t index;
    double time, dist;
    NodeId host;
  };
  std::vector<AnchorInfo> anchors;
  for (const auto& it : bc.value[static_cast<std::size_t>(bfs.root)])
    anchors.push_back({int_of(it.payload[0]), real_of(it.payload[1]), real_of(it.payload[2]), it.origin});
  std::sort(anchors.begin(), anchors.end(), [](const AnchorInfo& a, const AnchorInfo& b) { return a.index < b.index; });
  std::vector<BroadcastItem> kept;
  double last = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (i == 0 || anchors[i].time - last > eps * anchors[i].dist) {
      last = anchors[i].time;
      kept.push_back({bfs.root, {word_of_int(anchors[i].index)}});
      bp.filtered.push_back({anchors[i].host, anchors[i].index, anchors[i].time});
    }
  }
  auto bc2 = pipeline_broadcast(engine, bfs, kept);
  metrics += bc2.metrics;
  return {std::move(bp), metrics};
}

Run<HResult> build_h(RoundEngine& engine, const FragmentDecomposition& mst, const FragmentDecomposition& spt_frags,
                     const BfsTree& bfs, const ApproxSpt& spt, const BreakPoints& bp) {
  const WeightedGraph& g = engine.graph();
  const int n = g.n();
  const std::size_t k = spt_frags.count();
  RoundMetrics metrics;
  const auto marked = bp.vertex_flags(n);
  const auto forest = AgentForest::of_vertices(spt_frags.fragment_parent());

  // Inside each fragment of the spt: does the fragment-internal subtree hold a break point?
  auto up = forest_upcast(engine, forest, [&](std::int32_t a, ChildValues ch) {
    Word any = word_of_int(marked[static_cast<std::size_t>(a)]);
    for (const auto& [c, w] : ch) any |= w[0];
    return std::vector<Word>{any};
  });
  metrics += up.metrics;

  std::vector<BroadcastItem> items;
  for (std::size_t i = 0; i < k; ++i) {
    const NodeId r = spt_frags.fragment_root[i];
    items.push_back({r, {word_of_int(static_cast<std::int64_t>(i)), up.value[static_cast<std::size_t>(r)][0]}});
  }
  auto bc = pipeline_broadcast(engine, bfs, items);
  metrics += bc.metrics;

  std::vector<char> frag_flag(k, 0);
  for (const auto& it : bc.value[static_cast<std::size_t>(bfs.root)])
    frag_flag[static_cast<std::size_t>(int_of(it.payload[0]))] = static_cast<char>(int_of(it.payload[1]) != 0);
  std::vector<std::vector<std::size_t>> fchildren(k);
  for (std::size_t i = 1; i < k; ++i) fchildren[static_cast<std::size_t>(spt_frags.parent_fragment[i])].push_back(i);
  std::vector<std::size_t> order{0};
  for (std::size_t q = 0; q < order.size(); ++q)
    for (auto c : fchildren[order[q]]) order.push_back(c);
  std::vector<char> below(k, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    below[*it] = frag_flag[*it];
    for (auto c : fchildren[*it]) below[*it] = static_cast<char>(below[*it] || below[c]);
  }

  const auto children = spt_frags.children();
  auto up2 = forest_upcast(engine, forest, [&](std::int32_t a, ChildValues ch) {
    bool any = marked[static_cast<std::size_t>(a)];
    for (const auto& [c, w] : ch) any = any || int_of(w[0]) != 0;
    for (NodeId z : children[static_cast<std::size_t>(a)]) {
      const auto fz = static_cast<std::size_t>(spt_frags.fragment_of[static_cast<std::size_t>(z)]);
      if (fz != static_cast<std::size_t>(spt_frags.fragment_of[static_cast<std::size_t>(a)])) any = any || below[fz];
    }
    return std::vector<Word>{word_of_int(any ? 1 : 0)};
  });
  metrics += up2.metrics;

  HResult h;
  h.in_subtree_set.resize(static_cast<std::size_t>(n));
  h.edge_mask.assign(g.m(), 0);
  for (EdgeId e : mst.tree_edges()) h.edge_mask[static_cast<std::size_t>(e)] = 1;
  for (NodeId v = 0; v < n; ++v) {
    const bool in = int_of(up2.value[static_cast<std::size_t>(v)][0]) != 0;
    h.in_subtree_set[static_cast<std::size_t>(v)] = in;
    const EdgeId pe = spt.forest.parent_edge[static_cast<std::size_t>(v)];
    if (in && pe >= 0) h.edge_mask[static_cast<std::size_t>(pe)] = 1;
  }
  return {std::move(h), metrics};
}

RoundMetrics SltStages::total() const { return fragments + tour + spt + breakpoints + h + final_tree; }

Run<SltResult> build_slt(RoundEngine& engine, NodeId root, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::InvalidArgument, "build_slt: eps must lie in (0, 1]");
  const WeightedGraph& g = engine.graph();
  if (root < 0 || root >= g.n()) throw Error(ErrorKind::InvalidArgument, "build_slt: root out of range");
  SltResult r;
  r.root = root;
  r.eps = eps;
  r.eps_internal = eps / kSltEpsDivisor;

  auto mst = compute_fragments(engine, root);
  r.stages.fragments = mst.metrics;
  auto bfs = build_bfs_tree(engine, root);
  auto tour = euler_tour_from(engine, mst.value, bfs.value);
  r.stages.tour = bfs.metrics + tour.metrics;
  auto spt = approx_spt(engine, root, r.eps_internal);
  r.stages.spt = spt.metrics;
  auto bp = select_breakpoints(engine, tour.value, bfs.value, mst.value, spt.value, r.eps_internal);
  r.stages.breakpoints = bp.metrics;
  const auto spt_mask = spt.value.edge_mask(g.m());
  auto spt_frags = compute_fragments(engine, root, spt_mask);
  auto h = build_h(engine, mst.value, spt_frags.value, bfs.value, spt.value, bp.value);
  r.stages.h = spt_frags.metrics + h.metrics;
  const std::vector<NodeId> src{root};
  auto fin = bellman_ford(engine, src, h.value.edge_mask);
  r.stages.final_tree = fin.metrics;

  r.breakpoints = std::move(bp.value);
  r.h = std::move(h.value);
  for (std::size_t e = 0; e < g.m(); ++e)
    if (r.h.edge_mask[e]) r.h_edges.push_back(static_cast<EdgeId>(e));
  r.tree = std::move(fin.value);
  for (EdgeId e : r.tree.parent_edge)
    if (e >= 0) r.tree_edges.push_back(e);
  std::sort(r.tree_edges.begin(), r.tree_edges.end());
  r.mst_edges = mst.value.tree_edges();
  const RoundMetrics total = r.stages.total();
  return {std::move(r), total};
}

Run<TradeoffResult> lightness_tradeoff(RoundEngine& engine, NodeId root, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::InvalidArgument, "lightness_tradeoff: gamma must lie in (0, 1)");
  const WeightedGraph& g = engine.graph();
  auto mst = compute_fragments(engine, root);
  std::vector<char> in_mst(g.m(), 0);
  for (EdgeId e : mst.value.tree_edges()) in_mst[static_cast<std::size_t>(e)] = 1;

  // Each endpoint rescales its incident edges from (delta, weight, MST membership) alone.
  TradeoffResult out;
  out.gamma = gamma;
  out.delta = gamma / kBaseLightness;
  std::vector<double> w(g.m());
  for (std::size_t e = 0; e < g.m(); ++e) w[e] = in_mst[e] ? g.edges()[e].w : g.edges()[e].w / out.delta;
  const WeightedGraph scaled = g.reweighted(w);
  RoundEngine inner(scaled, engine.config());
  auto base = build_slt(inner, root, 1.0);
  out.base = std::move(base.value);
  out.tree_edges = out.base.tree_edges;
  return {std::move(out), mst.metrics + base.metrics};
}

}  // namespace congest_light
