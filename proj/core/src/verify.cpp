#include "congest_light/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace congest_light {

std::string substitute_name(Substitute s) {
  switch (s) {
    case Substitute::BellmanFordSpt: return "bellman_ford_spt";
    case Substitute::DominanceLeLists: return "dominance_le_lists";
    case Substitute::BoundedSssp: return "bounded_sssp";
    case Substitute::BoruvkaFragments: return "boruvka_fragments";
  }
  return "unknown";
}

std::string substitute_note(Substitute s) {
  switch (s) {
    case Substitute::BellmanFordSpt:
      return "approximate shortest-path tree computed by exact Bellman-Ford; rounds follow its hop depth";
    case Substitute::DominanceLeLists:
      return "LE lists by dominance-filtered Bellman-Ford over the whole graph; rounds follow the hop diameter";
    case Substitute::BoundedSssp:
      return "hopset exploration replaced by bounded multi-source Bellman-Ford; rounds follow the hop depth of 2 delta balls";
    case Substitute::BoruvkaFragments:
      return "MST fragments grown by a fixed number of Boruvka phases instead of size/diameter freezing";
  }
  return "";
}

std::vector<Substitute> substitutes_used(Algorithm a) {
  switch (a) {
    case Algorithm::Tour:
    case Algorithm::Spanner: return {Substitute::BoruvkaFragments};
    case Algorithm::Slt: return {Substitute::BoruvkaFragments, Substitute::BellmanFordSpt};
    case Algorithm::Net: return {Substitute::DominanceLeLists, Substitute::BellmanFordSpt};
    case Algorithm::Doubling:
      return {Substitute::DominanceLeLists, Substitute::BellmanFordSpt, Substitute::BoundedSssp};
  }
  return {};
}

namespace {

void sampled_stretch(const WeightedGraph& g, const WeightedGraph& h, const AuditOptions& opts, AuditReport& r) {
  const int n = g.n();
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  std::map<NodeId, std::vector<NodeId>> by_source;
  for (std::int64_t i = 0; i < opts.samples; ++i) {
    const NodeId u = pick(rng), v = pick(rng);
    if (u != v) by_source[std::min(u, v)].push_back(std::max(u, v));
  }
  double worst = 1.0;
  for (const auto& [u, targets] : by_source) {
    const auto dg = sssp_oracle(g, u);
    const auto dh = sssp_oracle(h, u);
    for (NodeId v : targets) {
      const double s = dh[static_cast<std::size_t>(v)] / dg[static_cast<std::size_t>(v)];
      ++r.pairs_checked;
      if (s > worst) {
        worst = s;
        r.worst_pair = {u, v};
      }
    }
  }
  r.max_stretch_sampled = worst;
}

void edge_stretch(const WeightedGraph& g, const WeightedGraph& h, AuditReport& r) {
  double worst = 1.0;
  for (NodeId u = 0; u < g.n(); ++u) {
    bool any = false;
    for (const auto& inc : g.adj(u)) any |= inc.to > u;
    if (!any) continue;
    const auto dh = sssp_oracle(h, u);
    for (const auto& inc : g.adj(u)) {
      if (inc.to < u) continue;
      const double s = dh[static_cast<std::size_t>(inc.to)] / inc.w;
      ++r.pairs_checked;
      if (s > worst) {
        worst = s;
        r.worst_pair = {u, inc.to};
      }
    }
  }
  r.max_stretch_edge = worst;
}

}  // namespace

AuditReport audit_spanner(const WeightedGraph& g, std::span<const EdgeId> h_edges, const AuditOptions& opts) {
  for (EdgeId e : h_edges)
    if (e < 0 || static_cast<std::size_t>(e) >= g.m())
      throw Error(ErrorKind::InvalidArgument, "audit: edge id " + std::to_string(e) + " out of range");
  std::vector<EdgeId> ids(h_edges.begin(), h_edges.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const WeightedGraph h = g.subgraph(ids);
  if (!h.connected()) throw Error(ErrorKind::AuditFailure, "audit: subgraph does not span the graph");

  AuditReport r;
  r.edge_count = ids.size();
  for (EdgeId e : ids) r.weight += g.edge(e).w;
  r.mst_weight = mst_oracle(g).weight;
  r.lightness = r.mst_weight > 0 ? r.weight / r.mst_weight : 1.0;
  const bool per_edge = opts.mode == StretchMode::PerEdge && g.n() <= opts.per_edge_cap;
  r.mode = per_edge ? StretchMode::PerEdge : StretchMode::SampledPairs;
  if (g.n() < 2) {
    r.max_stretch = 1.0;
  } else if (per_edge) {
    edge_stretch(g, h, r);
    r.max_stretch = r.max_stretch_edge;
  } else {
    sampled_stretch(g, h, opts, r);
    r.max_stretch = r.max_stretch_sampled;
  }
  return r;
}

void attach_run(AuditReport& report, const RoundMetrics& metrics, Algorithm algo) {
  report.rounds = metrics.rounds_used;
  report.messages = metrics.total_messages;
  report.budget_violations = metrics.budget_violations;
  report.deviations.clear();
  for (auto s : substitutes_used(algo)) report.deviations.push_back(substitute_name(s));
}

NetAudit audit_net(const WeightedGraph& g, std::span<const NodeId> net, double cover_bound, double sep_bound) {
  NetAudit a;
  const int n = g.n();
  if (net.empty()) {
    a.covering_radius = std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < n; ++v) a.uncovered.push_back(v);
    return a;
  }
  std::vector<NodeId> pts(net.begin(), net.end());
  std::sort(pts.begin(), pts.end());
  std::vector<double> cover(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<NodeId> nearest(static_cast<std::size_t>(n), kNoNode);
  for (NodeId p : pts) {
    const auto d = sssp_oracle(g, p);
    for (NodeId v = 0; v < n; ++v) {
      const auto vi = static_cast<std::size_t>(v);
      if (d[vi] < cover[vi]) {
        cover[vi] = d[vi];
        nearest[vi] = p;
      }
    }
    for (NodeId q : pts) {
      if (q <= p) continue;
      const double dq = d[static_cast<std::size_t>(q)];
      if (dq < a.min_separation) {
        a.min_separation = dq;
        a.closest_pair = {p, q};
      }
      if (dq <= sep_bound) a.close_pairs.emplace_back(p, q);
    }
  }
  a.covering_radius = -1.0;
  for (NodeId v = 0; v < n; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (cover[vi] > a.covering_radius) {
      a.covering_radius = cover[vi];
      a.farthest = v;
      a.farthest_center = nearest[vi];
    }
    if (cover[vi] > cover_bound) a.uncovered.push_back(v);
  }
  a.ok = a.uncovered.empty() && a.close_pairs.empty();
  return a;
}

}  // namespace congest_light
