#include "congest_light/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "congest_light/euler_tour.hpp"

namespace congest_light {

const BoundedSssp::Label* BoundedSssp::find(NodeId v, NodeId source) const {
  const auto& l = labels[static_cast<std::size_t>(v)];
  auto it = std::lower_bound(l.begin(), l.end(), source, [](const Label& a, NodeId s) { return a.source < s; });
  return it != l.end() && it->source == source ? &*it : nullptr;
}

namespace {

using Label = BoundedSssp::Label;

const Incident& incident_to(const Context& c, NodeId from) {
  auto nb = c.neighbors();
  return *std::lower_bound(nb.begin(), nb.end(), from, [](const Incident& x, NodeId t) { return x.to < t; });
}

struct SsspNode {
  struct Entry {
    Label label;
    double announced = std::numeric_limits<double>::infinity();
  };
  using Pending = std::pair<double, NodeId>;

  double bound = 0.0;
  std::size_t per_message = 1;
  bool is_source = false;
  int n = 0;
  std::vector<Entry> labels;
  std::vector<std::int32_t> slot;  // source -> index into labels, sized on first use
  // Nearest pending announcement first; stale heap entries are skipped on pop.
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending;

  Entry* lookup(NodeId src) {
    if (slot.empty()) return nullptr;
    const auto k = slot[static_cast<std::size_t>(src)];
    return k < 0 ? nullptr : &labels[static_cast<std::size_t>(k)];
  }
  void improve(NodeId src, double d, NodeId parent, EdgeId edge) {
    Entry* e = lookup(src);
    if (!e) {
      if (slot.empty()) slot.assign(static_cast<std::size_t>(n), -1);
      slot[static_cast<std::size_t>(src)] = static_cast<std::int32_t>(labels.size());
      e = &labels.emplace_back();
    }
    e->label = {src, d, parent, edge};
    pending.push({d, src});
  }
  void step(Context& c) {
    if (c.round() == 0) {
      if (is_source) improve(c.id(), 0.0, kNoNode, -1);
    } else {
      for (const auto& m : c.inbox()) {
        const Incident& inc = incident_to(c, m.from);
        for (std::size_t i = 0; i + 1 < m.words.size(); i += 2) {
          const auto src = static_cast<NodeId>(int_of(m.words[i]));
          const double nd = real_of(m.words[i + 1]) + inc.w;
          if (nd > bound) continue;
          Entry* e = lookup(src);
          if (!e || nd < e->label.dist) {
            improve(src, nd, m.from, inc.edge);
          } else if (nd == e->label.dist && e->label.parent != kNoNode && m.from < e->label.parent) {
            e->label.parent = m.from;
            e->label.parent_edge = inc.edge;
          }
        }
      }
    }
    if (pending.empty()) return;
    batch.clear();
    while (!pending.empty() && batch.size() < per_message) {
      const auto [d, s] = pending.top();
      pending.pop();
      Entry* e = lookup(s);
      if (e->label.dist != d || e->announced <= d) continue;
      e->announced = d;
      batch.push_back({d, s});
    }
    // Skip neighbors the cutoff already excludes.
    for (const auto& inc : c.neighbors()) {
      msg.clear();
      for (const auto& [d, s] : batch)
        if (d + inc.w <= bound) {
          msg.push_back(word_of_int(s));
          msg.push_back(word_of(d));
        }
      if (!msg.empty()) c.send(inc.to, msg);
    }
  }
  bool done() const { return pending.empty(); }

 private:
  std::vector<Pending> batch;
  std::vector<Word> msg;
};

struct MarkNode {
  const BoundedSssp* sssp = nullptr;
  std::size_t per_message = 1;
  int n = 0;
  std::vector<NodeId> start;
  std::vector<char> walked;  // per source, sized on first use
  std::vector<NodeId> queue;
  std::vector<EdgeId> marked;

  void take(NodeId self, NodeId s) {
    if (s == self) return;
    if (walked.empty()) walked.assign(static_cast<std::size_t>(n), 0);
    auto& w = walked[static_cast<std::size_t>(s)];
    if (!w) {
      w = 1;
      queue.push_back(s);
    }
  }
  void step(Context& c) {
    if (c.round() == 0) {
      for (NodeId s : start) take(c.id(), s);
    } else {
      for (const auto& m : c.inbox())
        for (Word w : m.words) take(c.id(), static_cast<NodeId>(int_of(w)));
    }
    if (queue.empty()) return;
    // Tokens for one parent share a message; overflow waits for the next round.
    routed.clear();
    for (NodeId s : queue) routed.push_back({sssp->find(c.id(), s), s});
    std::stable_sort(routed.begin(), routed.end(),
                     [](const auto& a, const auto& b) { return a.first->parent < b.first->parent; });
    queue.clear();
    std::vector<Word> words;
    for (std::size_t i = 0; i < routed.size();) {
      const NodeId to = routed[i].first->parent;
      words.clear();
      for (; i < routed.size() && routed[i].first->parent == to; ++i) {
        if (words.size() >= per_message) {
          queue.push_back(routed[i].second);
          continue;
        }
        words.push_back(word_of_int(routed[i].second));
        marked.push_back(routed[i].first->parent_edge);
      }
      c.send(to, words);
    }
  }
  bool done() const { return queue.empty(); }

 private:
  std::vector<std::pair<const Label*, NodeId>> routed;
};

}  // namespace

Run<BoundedSssp> bounded_multisource_sssp(RoundEngine& engine, std::span<const NodeId> sources, double bound) {
  const int n = engine.graph().n();
  if (!(bound >= 0.0)) throw Error(ErrorKind::InvalidArgument, "bounded sssp: bound must be non-negative");
  std::vector<SsspNode> progs(static_cast<std::size_t>(n));
  const auto per_message = static_cast<std::size_t>(std::max(1, engine.config().word_budget / 2));
  for (auto& p : progs) {
    p.bound = bound;
    p.per_message = per_message;
    p.n = n;
  }
  for (NodeId s : sources) progs[static_cast<std::size_t>(s)].is_source = true;
  Run<BoundedSssp> out;
  out.metrics = engine.run(progs);
  auto& r = out.value;
  r.bound = bound;
  r.sources.assign(sources.begin(), sources.end());
  std::sort(r.sources.begin(), r.sources.end());
  r.labels.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto& dst = r.labels[static_cast<std::size_t>(v)];
    for (const auto& e : progs[static_cast<std::size_t>(v)].labels) dst.push_back(e.label);
    std::sort(dst.begin(), dst.end(), [](const Label& a, const Label& b) { return a.source < b.source; });
    r.max_load = std::max<std::int64_t>(r.max_load, static_cast<std::int64_t>(dst.size()));
  }
  return out;
}

Run<std::vector<EdgeId>> mark_paths(RoundEngine& engine, const BoundedSssp& sssp, std::span<const char> is_target) {
  const int n = engine.graph().n();
  std::vector<MarkNode> progs(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto& p = progs[static_cast<std::size_t>(v)];
    p.sssp = &sssp;
    p.per_message = static_cast<std::size_t>(std::max(1, engine.config().word_budget));
    p.n = n;
    if (is_target[static_cast<std::size_t>(v)])
      for (const auto& l : sssp.labels[static_cast<std::size_t>(v)])
        if (l.source != v) p.start.push_back(l.source);
  }
  Run<std::vector<EdgeId>> out;
  out.metrics = engine.run(progs);
  for (const auto& p : progs) out.value.insert(out.value.end(), p.marked.begin(), p.marked.end());
  std::sort(out.value.begin(), out.value.end());
  out.value.erase(std::unique(out.value.begin(), out.value.end()), out.value.end());
  return out;
}

Run<DoublingResult> build_doubling_spanner(RoundEngine& engine, double eps, const DoublingOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "doubling: eps must lie in (0, 1)");
  const WeightedGraph& g = engine.graph();
  const int n = g.n();
  Run<DoublingResult> out;
  auto& r = out.value;
  r.eps = eps;
  r.eps_internal = eps / kDoublingEpsDivisor;
  auto bfs = build_bfs_tree(engine, opts.root);
  out.metrics += bfs.metrics;
  if (opts.distributed_mst_weight) {
    auto frags = compute_fragments(engine, opts.root);
    auto tour = euler_tour_from(engine, frags.value, bfs.value);
    out.metrics += frags.metrics + tour.metrics;
    r.mst_weight = tour.value.length / 2.0;
  } else {
    r.mst_weight = mst_oracle(g).weight;
  }
  r.base_scale = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) r.base_scale = std::min(r.base_scale, e.w);
  if (g.m() == 0) return out;

  const double ratio = std::max(1.0, r.mst_weight / r.base_scale);
  const int top = static_cast<int>(std::ceil(std::log(ratio) / std::log1p(r.eps_internal)));
  const double load_limit = opts.load_multiple * std::pow(r.eps_internal, -opts.ddim);
  std::vector<char> in_h(g.m(), 0);
  for (int i = 0; i <= top; ++i) {
    DoublingScale sc;
    sc.index = i;
    sc.delta = r.base_scale * std::pow(1.0 + r.eps_internal, i);
    // Slack 1/2 at radius (4/3) eps delta: covering 2 eps delta, separation (8/9) eps delta.
    auto net = construct_net_on(engine, bfs.value, kDoublingNetRadius * r.eps_internal * sc.delta, kDoublingNetSlack,
                                static_cast<std::uint64_t>(i) + 1);
    sc.metrics += net.metrics;
    sc.net = std::move(net.value.net);
    sc.net_iterations = net.value.iterations;
    auto sssp = bounded_multisource_sssp(engine, sc.net, 2.0 * sc.delta);
    sc.metrics += sssp.metrics;
    sc.max_load = sssp.value.max_load;
    if (static_cast<double>(sc.max_load) > load_limit)
      r.warnings.push_back("scale " + std::to_string(i) + ": load " + std::to_string(sc.max_load) +
                           " exceeds packing allowance " + std::to_string(load_limit));
    std::vector<char> is_net(static_cast<std::size_t>(n), 0);
    for (NodeId v : sc.net) is_net[static_cast<std::size_t>(v)] = 1;
    for (NodeId v : sc.net) sc.pairs += sssp.value.labels[static_cast<std::size_t>(v)].size() - 1;
    auto paths = mark_paths(engine, sssp.value, is_net);
    sc.metrics += paths.metrics;
    sc.path_edges = std::move(paths.value);
    for (EdgeId e : sc.path_edges) {
      auto& f = in_h[static_cast<std::size_t>(e)];
      if (!f) {
        f = 1;
        ++sc.new_edges;
        sc.added_weight += g.edge(e).w;
      }
    }
    out.metrics += sc.metrics;
    r.scales.push_back(std::move(sc));
  }
  for (std::size_t e = 0; e < g.m(); ++e)
    if (in_h[e]) r.edges.push_back(static_cast<EdgeId>(e));
  return out;
}

std::int64_t packing_audit(const DistanceMatrix& d, std::span<const NodeId> points, double radius, double separation) {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (d(points[i], points[j]) < separation)
        throw Error(ErrorKind::AuditFailure, "packing audit: points closer than the separation");
  std::int64_t best = 0;
  for (NodeId x = 0; x < d.n(); ++x) {
    std::int64_t c = 0;
    for (NodeId p : points)
      if (d(x, p) <= radius) ++c;
    best = std::max(best, c);
  }
  return best;
}

bool net_cardinality_audit(double mst_weight, std::size_t points, double separation) {
  return static_cast<double>(points) <= std::ceil(2.0 * mst_weight / separation);
}

Run<PsiEstimate> mst_weight_estimator(RoundEngine& engine, double alpha, NodeId root) {
  if (!(alpha >= 1.0)) throw Error(ErrorKind::InvalidArgument, "psi estimator: alpha must be >= 1");
  const int n = engine.graph().n();
  Run<PsiEstimate> out;
  out.value.alpha = alpha;
  auto bfs = build_bfs_tree(engine, root);
  out.metrics += bfs.metrics;
  // Net radius and slack so that covering <= alpha 2^i and separation > 2^i.
  double stretch = 1.0, slack = 0.0;
  if (alpha >= 4.0) {
    slack = 0.5;
    stretch = alpha / 1.5;
  } else if (alpha > 1.0) {
    slack = std::sqrt(alpha) - 1.0;
    stretch = std::sqrt(alpha);
  }
  // Start at the largest i with alpha 2^i below the minimum distance, so the first net is all of V.
  std::vector<std::vector<Word>> lightest(static_cast<std::size_t>(n),
                                          std::vector<Word>{word_of(std::numeric_limits<double>::infinity())});
  for (const auto& e : engine.graph().edges())
    for (NodeId end : {e.u, e.v}) {
      auto& slot = lightest[static_cast<std::size_t>(end)][0];
      slot = word_of(std::min(real_of(slot), e.w));
    }
  auto min_weight = global_reduce(engine, bfs.value, std::move(lightest), [](std::span<Word> acc, std::span<const Word> in) {
    acc[0] = word_of(std::min(real_of(acc[0]), real_of(in[0])));
  });
  out.metrics += min_weight.metrics;
  const double w_min = real_of(min_weight.value[0]);
  int first = -static_cast<int>(std::ceil(std::log2(alpha)));
  if (std::isfinite(w_min)) {
    first = static_cast<int>(std::floor(std::log2(w_min / alpha)));
    while (alpha * std::ldexp(1.0, first) >= w_min) --first;
    while (alpha * std::ldexp(1.0, first + 1) < w_min) ++first;
  }
  for (int i = first;; ++i) {
    const double scale = std::ldexp(1.0, i);
    auto net = construct_net_on(engine, bfs.value, stretch * scale, slack, static_cast<std::uint64_t>(i + 4096));
    out.metrics += net.metrics;
    std::vector<std::vector<Word>> member(static_cast<std::size_t>(n), std::vector<Word>{0});
    for (NodeId v : net.value.net) member[static_cast<std::size_t>(v)][0] = 1;
    auto count = global_reduce(engine, bfs.value, std::move(member),
                               [](std::span<Word> acc, std::span<const Word> in) { acc[0] += in[0]; });
    out.metrics += count.metrics;
    const auto size = int_of(count.value[0]);
    out.value.exponents.push_back(i);
    out.value.net_sizes.push_back(size);
    out.value.psi += static_cast<double>(size) * alpha * std::ldexp(1.0, i + 1);
    if (size <= 1) break;
  }
  out.value.metrics = out.metrics;
  return out;
}

}  // namespace congest_light
