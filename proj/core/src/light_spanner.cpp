#include "congest_light/light_spanner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace congest_light {

// ------------------------------------------------------------------ buckets

double EdgeBuckets::scale_weight(int i) const { return tour_length / std::pow(1.0 + eps, i); }

EdgeBuckets bucket_edges(const WeightedGraph& g, double tour_length, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "bucket_edges: eps must be positive");
  EdgeBuckets b;
  b.tour_length = tour_length;
  b.eps = eps;
  b.n = g.n();
  b.top = g.n() > 1 ? static_cast<int>(std::ceil(std::log(static_cast<double>(g.n())) / std::log1p(eps))) : 0;
  b.scales.resize(static_cast<std::size_t>(b.top) + 1);
  b.bucket_of.assign(g.m(), EdgeBuckets::kLight);
  const double light_cap = tour_length / g.n();
  for (std::size_t e = 0; e < g.m(); ++e) {
    const double w = g.edges()[e].w;
    int& slot = b.bucket_of[e];
    if (w <= light_cap) {
      slot = EdgeBuckets::kLight;
      b.light.push_back(static_cast<EdgeId>(e));
      continue;
    }
    if (w > tour_length) {
      slot = EdgeBuckets::kOverflow;
      b.overflow.push_back(static_cast<EdgeId>(e));
      continue;
    }
    // Guess from logarithms, then settle on the exact comparisons.
    int i = static_cast<int>(std::floor(std::log(tour_length / w) / std::log1p(eps)));
    i = std::clamp(i, 0, b.top);
    while (i > 0 && w > b.scale_weight(i)) --i;
    while (i < b.top && w <= b.scale_weight(i + 1)) ++i;
    slot = i;
    b.scales[static_cast<std::size_t>(i)].push_back(static_cast<EdgeId>(e));
  }
  return b;
}

double case_boundary(int n, int k, double eps) {
  const double x = eps * std::pow(static_cast<double>(n), static_cast<double>(k) / (2.0 * k + 1.0));
  return std::log(x) / std::log1p(eps);
}

// ------------------------------------------------------------ cluster graphs

ClusterGraph cluster_graph(const WeightedGraph& g, std::span<const EdgeId> edges, std::span<const std::int64_t> cluster_of,
                           std::int64_t count) {
  ClusterGraph cg;
  cg.count = count;
  cg.adj.resize(static_cast<std::size_t>(count));
  for (EdgeId e : edges) {
    const auto a = cluster_of[static_cast<std::size_t>(g.edge(e).u)];
    const auto b = cluster_of[static_cast<std::size_t>(g.edge(e).v)];
    if (a == b) continue;
    cg.adj[static_cast<std::size_t>(a)].push_back(b);
    cg.adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& l : cg.adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return cg;
}

namespace {

constexpr int kResampleCap = 1000;

double draw_radius(double rate, int k, std::mt19937_64& rng) {
  std::exponential_distribution<double> dist(rate);
  for (int t = 0; t < kResampleCap; ++t) {
    const double r = dist(rng);
    if (r < k) return r;
  }
  throw Error(ErrorKind::CapExceeded, "radius sampling: no value below k after resampling cap");
}

double radius_rate(std::int64_t count, int k) {
  return std::log(static_cast<double>(std::max<std::int64_t>(2, count))) / k;
}

struct State {
  double m;
  std::int64_t s;
};

bool better_state(const State& a, const State& b) { return a.m > b.m || (a.m == b.m && a.s < b.s); }

/// Candidate edge for one (cluster, source): the value heard, the neighbor cluster, and the edge.
struct Pick {
  double val;
  std::int64_t nbr;
  double w;
  NodeId lo, hi;
  EdgeId e;
};

bool better_pick(const Pick& a, const Pick& b) {
  if (a.val != b.val) return a.val > b.val;
  if (a.nbr != b.nbr) return a.nbr < b.nbr;
  if (a.w != b.w) return a.w < b.w;
  if (a.lo != b.lo) return a.lo < b.lo;
  return a.hi < b.hi;
}

std::vector<Word> encode_pick(const Pick& p) {
  return {word_of(p.val), word_of_int(p.nbr), word_of(p.w), word_of_int(p.lo), word_of_int(p.hi), word_of_int(p.e)};
}

Pick decode_pick(std::span<const Word> w) {
  return {real_of(w[0]), int_of(w[1]), real_of(w[2]), static_cast<NodeId>(int_of(w[3])),
          static_cast<NodeId>(int_of(w[4])), static_cast<EdgeId>(int_of(w[5]))};
}

const MergeFn kPickMerge = [](std::span<Word> acc, std::span<const Word> in) {
  if (better_pick(decode_pick(in), decode_pick(acc))) std::copy(in.begin(), in.end(), acc.begin());
};

const MergeFn kStateMerge = [](std::span<Word> acc, std::span<const Word> in) {
  if (better_state({real_of(in[0]), int_of(in[1])}, {real_of(acc[0]), int_of(acc[1])}))
    std::copy(in.begin(), in.end(), acc.begin());
};

Pick make_pick(const WeightedGraph& g, EdgeId e, double val, std::int64_t nbr) {
  const auto& ed = g.edge(e);
  return {val, nbr, ed.w, std::min(ed.u, ed.v), std::max(ed.u, ed.v), e};
}

void offer(std::map<std::int64_t, Pick>& picks, std::int64_t source, const Pick& p) {
  auto it = picks.find(source);
  if (it == picks.end())
    picks.emplace(source, p);
  else if (better_pick(p, it->second))
    it->second = p;
}

int attempt_budget(int n) { return std::max(3, static_cast<int>(std::ceil(std::log2(std::max(2, n)))) + 1); }

/// E_i neighbors heard over one exchange: (edge, neighbor cluster).
using Heard = std::vector<std::vector<std::pair<EdgeId, std::int64_t>>>;

Heard exchange_clusters(RoundEngine& engine, std::span<const char> mask, std::span<const std::int64_t> cluster_of,
                        RoundMetrics& metrics) {
  const WeightedGraph& g = engine.graph();
  Heard heard(static_cast<std::size_t>(g.n()));
  metrics += neighbor_exchange(
      engine,
      [&](Context& c) {
        for (const auto& inc : c.neighbors())
          if (mask[static_cast<std::size_t>(inc.edge)])
            c.send(inc.to, {word_of_int(cluster_of[static_cast<std::size_t>(c.id())])});
      },
      [&](Context& c) {
        for (const auto& m : c.inbox())
          heard[static_cast<std::size_t>(c.id())].push_back({g.find_edge(c.id(), m.from), int_of(m.words[0])});
      });
  return heard;
}

std::vector<char> edge_mask_of(std::size_t m, std::span<const EdgeId> edges) {
  std::vector<char> mask(m, 0);
  for (EdgeId e : edges) mask[static_cast<std::size_t>(e)] = 1;
  return mask;
}

}  // namespace

std::vector<double> sample_radii(std::int64_t count, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "sample_radii: k must be >= 1");
  std::mt19937_64 rng(seed);
  const double rate = radius_rate(count, k);
  std::vector<double> r(static_cast<std::size_t>(std::max<std::int64_t>(0, count)));
  for (auto& x : r) x = draw_radius(rate, k, rng);
  return r;
}

std::vector<std::pair<std::int64_t, std::int64_t>> shifted_radius_protocol(const ClusterGraph& cg, int k,
                                                                          std::span<const double> radii) {
  const auto N = static_cast<std::size_t>(cg.count);
  if (radii.size() < N) throw Error(ErrorKind::InvalidArgument, "shifted radius protocol: one radius per cluster required");
  for (std::size_t x = 0; x < N; ++x)
    if (!cg.adj[x].empty() && !(radii[x] < k)) throw Error(ErrorKind::Contract, "shifted radius protocol: radius must be below k");
  std::vector<std::vector<State>> hist;
  std::vector<State> cur(N);
  for (std::size_t x = 0; x < N; ++x) cur[x] = {radii[x], static_cast<std::int64_t>(x)};
  for (int t = 1; t <= k; ++t) {
    hist.push_back(cur);
    std::vector<State> next = cur;
    for (std::size_t x = 0; x < N; ++x)
      for (auto z : cg.adj[x]) {
        const State c{hist.back()[static_cast<std::size_t>(z)].m - 1.0, hist.back()[static_cast<std::size_t>(z)].s};
        if (better_state(c, next[x])) next[x] = c;
      }
    cur = std::move(next);
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::size_t x = 0; x < N; ++x) {
    std::map<std::int64_t, std::pair<double, std::int64_t>> best;  // source -> (value, neighbor)
    for (auto z : cg.adj[x])
      for (const auto& h : hist) {
        const State& st = h[static_cast<std::size_t>(z)];
        const double val = st.m - 1.0;
        auto it = best.find(st.s);
        if (it == best.end() || val > it->second.first || (val == it->second.first && z < it->second.second))
          best[st.s] = {val, z};
      }
    for (const auto& [src, vb] : best)
      if (vb.first >= cur[x].m - 1.0)
        out.push_back({std::min<std::int64_t>(static_cast<std::int64_t>(x), vb.second),
                       std::max<std::int64_t>(static_cast<std::int64_t>(x), vb.second)});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// -------------------------------------------------------------- Baswana-Sen

Run<std::vector<EdgeId>> baswana_sen(RoundEngine& engine, std::span<const char> edge_mask, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "baswana_sen: k must be >= 1");
  const WeightedGraph& g = engine.graph();
  const int n = g.n();
  const auto un = static_cast<std::size_t>(n);
  RoundMetrics metrics;
  std::vector<char> alive(edge_mask.begin(), edge_mask.end());
  std::vector<char> added(g.m(), 0);
  std::vector<NodeId> center(un);
  for (int v = 0; v < n; ++v) center[static_cast<std::size_t>(v)] = v;
  const double p = std::pow(static_cast<double>(n), -1.0 / k);
  auto sampled = [&](int iter, NodeId c) {
    const double u = static_cast<double>(mix_hash(mix_hash(seed, static_cast<std::uint64_t>(iter)), static_cast<std::uint64_t>(c)) >> 11) * 0x1.0p-53;
    return u < p;
  };
  auto key_less = [&](EdgeId a, EdgeId b) { return edge_key_less(g.edge(a), g.edge(b)); };

  // Neighbor centers heard over alive edges: (edge, neighbor, neighbor center).
  std::vector<std::vector<std::tuple<EdgeId, NodeId, NodeId>>> heard(un);
  auto exchange = [&] {
    for (auto& h : heard) h.clear();
    metrics += neighbor_exchange(
        engine,
        [&](Context& c) {
          for (const auto& inc : c.neighbors())
            if (alive[static_cast<std::size_t>(inc.edge)])
              c.send(inc.to, {word_of_int(center[static_cast<std::size_t>(c.id())])});
        },
        [&](Context& c) {
          for (const auto& m : c.inbox())
            heard[static_cast<std::size_t>(c.id())].push_back(
                {g.find_edge(c.id(), m.from), m.from, static_cast<NodeId>(int_of(m.words[0]))});
        });
  };
  auto drop_intra = [&] {
    for (int v = 0; v < n; ++v)
      for (const auto& [e, u, cu] : heard[static_cast<std::size_t>(v)])
        if (cu != kNoNode && cu == center[static_cast<std::size_t>(v)]) alive[static_cast<std::size_t>(e)] = 0;
  };

  exchange();
  drop_intra();
  for (int iter = 1; iter < k; ++iter) {
    std::vector<NodeId> next = center;
    for (int v = 0; v < n; ++v) {
      const auto vi = static_cast<std::size_t>(v);
      const NodeId c = center[vi];
      if (c == kNoNode || sampled(iter, c)) continue;
      std::map<NodeId, EdgeId> lightest;  // neighbor cluster -> lightest alive edge
      for (const auto& [e, u, cu] : heard[vi]) {
        if (!alive[static_cast<std::size_t>(e)] || cu == kNoNode) continue;
        auto it = lightest.find(cu);
        if (it == lightest.end() || key_less(e, it->second)) lightest[cu] = e;
      }
      EdgeId join = -1;
      NodeId join_center = kNoNode;
      for (const auto& [cu, e] : lightest)
        if (sampled(iter, cu) && (join < 0 || key_less(e, join))) {
          join = e;
          join_center = cu;
        }
      auto drop_cluster = [&](NodeId cu) {
        for (const auto& [e, u, cw] : heard[vi])
          if (cw == cu) alive[static_cast<std::size_t>(e)] = 0;
      };
      if (join >= 0) {
        added[static_cast<std::size_t>(join)] = 1;
        for (const auto& [cu, e] : lightest)
          if (key_less(e, join)) {
            added[static_cast<std::size_t>(e)] = 1;
            drop_cluster(cu);
          }
        drop_cluster(join_center);
        next[vi] = join_center;
      } else {
        for (const auto& [cu, e] : lightest) {
          added[static_cast<std::size_t>(e)] = 1;
          drop_cluster(cu);
        }
        next[vi] = kNoNode;
      }
    }
    center = std::move(next);
    exchange();  // carries new centers; removals are visible to both endpoints afterwards
    drop_intra();
  }
  // Final phase: lightest alive edge towards every neighboring cluster.
  for (int v = 0; v < n; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (center[vi] == kNoNode) continue;
    std::map<NodeId, EdgeId> lightest;
    for (const auto& [e, u, cu] : heard[vi]) {
      if (!alive[static_cast<std::size_t>(e)] || cu == kNoNode) continue;
      auto it = lightest.find(cu);
      if (it == lightest.end() || key_less(e, it->second)) lightest[cu] = e;
    }
    for (const auto& [cu, e] : lightest) added[static_cast<std::size_t>(e)] = 1;
  }
  std::vector<EdgeId> out;
  for (std::size_t e = 0; e < g.m(); ++e)
    if (added[e]) out.push_back(static_cast<EdgeId>(e));
  return {std::move(out), metrics};
}

// ------------------------------------------------------------- first regime

Run<ScaleResult> spanner_scale_case1(RoundEngine& engine, const EulerTour& tour, const BfsTree& bfs,
                                     const EdgeBuckets& buckets, int scale, int k, std::uint64_t seed) {
  const WeightedGraph& g = engine.graph();
  const int n = g.n();
  RoundMetrics metrics;
  ScaleResult out;
  out.scale = scale;
  out.regime = 1;
  out.scale_weight = buckets.scale_weight(scale);
  const double width = buckets.eps * out.scale_weight;
  const auto names = static_cast<std::int64_t>(std::ceil(buckets.tour_length / width)) + 1;
  out.cluster_count = names;
  out.cluster_of.resize(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v)
    out.cluster_of[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(std::ceil(tour.start[static_cast<std::size_t>(v)] / width));
  const auto& bucket = buckets.scales[static_cast<std::size_t>(scale)];
  const auto mask = edge_mask_of(g.m(), bucket);
  const Heard heard = exchange_clusters(engine, mask, out.cluster_of, metrics);

  std::set<std::int64_t> active;
  for (NodeId v = 0; v < n; ++v)
    for (const auto& [e, b] : heard[static_cast<std::size_t>(v)])
      if (b != out.cluster_of[static_cast<std::size_t>(v)]) active.insert(b);
  const auto names_u = static_cast<std::size_t>(names);
  const int budget = attempt_budget(n);

  for (int attempt = 1;; ++attempt) {
    out.attempts = attempt;
    // The root draws every radius and broadcasts them.
    out.radii = sample_radii(names, k, mix_hash(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<BroadcastItem> items;
    for (std::size_t a = 0; a < names_u; ++a)
      items.push_back({bfs.root, {word_of_int(static_cast<std::int64_t>(a)), word_of(out.radii[a])}});
    metrics += pipeline_broadcast(engine, bfs, items).metrics;

    // Cluster states are identical at every vertex after each broadcast.
    std::vector<State> cur(names_u);
    for (std::size_t a = 0; a < names_u; ++a) cur[a] = {out.radii[a], static_cast<std::int64_t>(a)};
    std::vector<std::vector<State>> hist;
    for (int t = 1; t <= k; ++t) {
      hist.push_back(cur);
      std::vector<std::vector<KeyedItem>> local(static_cast<std::size_t>(n));
      for (NodeId v = 0; v < n; ++v) {
        const auto A = out.cluster_of[static_cast<std::size_t>(v)];
        bool have = false;
        State best{0, 0};
        for (const auto& [e, B] : heard[static_cast<std::size_t>(v)]) {
          if (B == A) continue;
          const State c{cur[static_cast<std::size_t>(B)].m - 1.0, cur[static_cast<std::size_t>(B)].s};
          if (!have || better_state(c, best)) best = c;
          have = true;
        }
        if (have) local[static_cast<std::size_t>(v)].push_back({static_cast<Key>(A), {word_of(best.m), word_of_int(best.s)}});
      }
      auto agg = convergecast_aggregate(engine, bfs, std::move(local), names_u, kStateMerge);
      metrics += agg.metrics;
      std::vector<BroadcastItem> updates;
      for (const auto& it : agg.value) {
        const State c{real_of(it.value[0]), int_of(it.value[1])};
        if (better_state(c, cur[static_cast<std::size_t>(it.key)]))
          updates.push_back({bfs.root, {word_of_int(static_cast<std::int64_t>(it.key)), word_of(c.m), word_of_int(c.s)}});
      }
      auto bc = pipeline_broadcast(engine, bfs, updates);
      metrics += bc.metrics;
      for (const auto& it : bc.value[static_cast<std::size_t>(bfs.root)])
        cur[static_cast<std::size_t>(int_of(it.payload[0]))] = {real_of(it.payload[1]), int_of(it.payload[2])};
    }

    // Per (cluster, source) best delivering edge, filtered by the final value.
    std::vector<std::vector<KeyedItem>> local(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) {
      const auto A = out.cluster_of[static_cast<std::size_t>(v)];
      std::map<std::int64_t, Pick> picks;
      for (const auto& [e, B] : heard[static_cast<std::size_t>(v)]) {
        if (B == A) continue;
        for (const auto& h : hist) {
          const State& st = h[static_cast<std::size_t>(B)];
          offer(picks, st.s, make_pick(g, e, st.m - 1.0, B));
        }
      }
      for (const auto& [y, p] : picks)
        if (p.val >= cur[static_cast<std::size_t>(A)].m - 1.0)
          local[static_cast<std::size_t>(v)].push_back({static_cast<Key>(A * names + y), encode_pick(p)});
    }
    auto agg = convergecast_aggregate(engine, bfs, std::move(local), names_u * names_u, kPickMerge);
    metrics += agg.metrics;
    std::map<std::pair<std::int64_t, std::int64_t>, EdgeId> chosen;
    for (const auto& it : agg.value) {
      const auto A = static_cast<std::int64_t>(it.key) / names;
      const Pick p = decode_pick(it.value);
      const std::pair<std::int64_t, std::int64_t> pair{std::min(A, p.nbr), std::max(A, p.nbr)};
      auto f = chosen.find(pair);
      if (f == chosen.end() || edge_key_less(g.edge(p.e), g.edge(f->second))) chosen[pair] = p.e;
    }
    std::vector<BroadcastItem> edges;
    for (const auto& [pair, e] : chosen) edges.push_back({bfs.root, {word_of_int(e)}});
    metrics += pipeline_broadcast(engine, bfs, edges).metrics;

    const double limit = 4.0 * static_cast<double>(active.size()) * std::pow(static_cast<double>(names), 1.0 / k) + 1.0;
    if (static_cast<double>(chosen.size()) <= limit || attempt >= budget) {
      if (static_cast<double>(chosen.size()) > limit)
        throw Error(ErrorKind::CapExceeded, "spanner scale " + std::to_string(scale) + ": retry budget exhausted");
      out.cluster_edges.clear();
      out.edges.clear();
      for (const auto& [pair, e] : chosen) {
        out.cluster_edges.push_back(pair);
        out.edges.push_back(e);
      }
      std::sort(out.edges.begin(), out.edges.end());
      break;
    }
  }
  return {std::move(out), metrics};
}

// ------------------------------------------------------------ second regime

Run<ScaleResult> spanner_scale_case2(RoundEngine& engine, const EulerTour& tour, const BfsTree& bfs,
                                     const EdgeBuckets& buckets, int scale, int k, std::uint64_t seed) {
  const WeightedGraph& g = engine.graph();
  const int n = g.n();
  RoundMetrics metrics;
  ScaleResult out;
  out.scale = scale;
  out.regime = 2;
  out.scale_weight = buckets.scale_weight(scale);
  const double width = buckets.eps * out.scale_weight;
  const auto seq = tour.sequence();
  const std::size_t T = seq.size();
  const auto hop_cap = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(buckets.eps * n / std::pow(1.0 + buckets.eps, scale))));

  // Each appearance decides locally whether it starts an interval: its predecessor's time is its own
  // time minus the weight of the tree edge just walked.
  std::vector<NodeId> host(T);
  std::vector<std::int32_t> parent(T, -1);
  std::vector<char> is_center(T, 0);
  for (std::size_t j = 0; j < T; ++j) {
    host[j] = seq[j].vertex;
    const bool crosses = j > 0 && std::ceil(seq[j].time / width) != std::ceil(seq[j - 1].time / width);
    is_center[j] = j == 0 || crosses || static_cast<std::int64_t>(j) % hop_cap == 0;
    if (!is_center[j]) parent[j] = static_cast<std::int32_t>(j - 1);
  }
  const AgentForest forest(host, parent);
  out.interval_parent.assign(parent.begin(), parent.end());

  std::vector<std::int64_t> agent_cluster(T, -1);
  metrics += forest_downcast(engine, forest, [&](std::int32_t a, std::span<const Word> in) {
    const std::int64_t c = in.empty() ? a : int_of(in[0]);
    agent_cluster[static_cast<std::size_t>(a)] = c;
    std::vector<std::pair<std::int32_t, std::vector<Word>>> outs;
    for (auto ch : forest.children(a)) outs.push_back({ch, {word_of_int(c)}});
    return outs;
  });
  std::vector<std::int32_t> home(static_cast<std::size_t>(n));
  std::vector<char> is_home(T, 0);
  out.cluster_of.resize(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) {
    const auto h = static_cast<std::int32_t>(tour.appearances[static_cast<std::size_t>(v)].front().index);
    home[static_cast<std::size_t>(v)] = h;
    is_home[static_cast<std::size_t>(h)] = 1;
    out.cluster_of[static_cast<std::size_t>(v)] = agent_cluster[static_cast<std::size_t>(h)];
  }

  // Center count, needed for the radius distribution.
  std::vector<std::vector<Word>> ones(static_cast<std::size_t>(n), std::vector<Word>{0});
  for (std::size_t j = 0; j < T; ++j)
    if (is_center[j]) ones[static_cast<std::size_t>(host[j])][0] += 1;
  auto count = global_reduce(engine, bfs, ones, [](std::span<Word> acc, std::span<const Word> in) { acc[0] += in[0]; });
  metrics += count.metrics;
  out.cluster_count = int_of(count.value[0]);
  const double rate = radius_rate(out.cluster_count, k);

  const auto& bucket = buckets.scales[static_cast<std::size_t>(scale)];
  const auto mask = edge_mask_of(g.m(), bucket);
  const Heard clusters_heard = exchange_clusters(engine, mask, out.cluster_of, metrics);
  std::set<std::int64_t> active;
  for (NodeId v = 0; v < n; ++v)
    for (const auto& [e, b] : clusters_heard[static_cast<std::size_t>(v)])
      if (b != out.cluster_of[static_cast<std::size_t>(v)]) active.insert(b);
  const int budget = attempt_budget(n);
  const double per_cluster_cap =
      4.0 * std::pow(static_cast<double>(std::max<std::int64_t>(2, out.cluster_count)), 1.0 / k) *
          std::max(1.0, std::log(static_cast<double>(out.cluster_count))) + 1.0;

  for (int attempt = 1;; ++attempt) {
    out.attempts = attempt;
    const std::uint64_t aseed = mix_hash(seed, static_cast<std::uint64_t>(attempt));
    out.radii.assign(T, std::numeric_limits<double>::quiet_NaN());
    std::vector<State> center_state(T);
    for (std::size_t j = 0; j < T; ++j)
      if (is_center[j]) {
        std::mt19937_64 rng(mix_hash(aseed, j));
        out.radii[j] = draw_radius(rate, k, rng);
        center_state[j] = {out.radii[j], static_cast<std::int64_t>(j)};
      }

    // Every appearance learns the current state of its interval's center.
    std::vector<State> agent_state(T);
    auto push_states = [&] {
      metrics += forest_downcast(engine, forest, [&](std::int32_t a, std::span<const Word> in) {
        const State st = in.empty() ? center_state[static_cast<std::size_t>(a)] : State{real_of(in[0]), int_of(in[1])};
        agent_state[static_cast<std::size_t>(a)] = st;
        std::vector<std::pair<std::int32_t, std::vector<Word>>> outs;
        for (auto ch : forest.children(a)) outs.push_back({ch, {word_of(st.m), word_of_int(st.s)}});
        return outs;
      });
    };
    push_states();

    std::vector<std::map<std::int64_t, Pick>> picks(static_cast<std::size_t>(n));
    for (int t = 1; t <= k; ++t) {
      std::vector<char> have(static_cast<std::size_t>(n), 0);
      std::vector<State> best(static_cast<std::size_t>(n));
      metrics += neighbor_exchange(
          engine,
          [&](Context& c) {
            const auto v = static_cast<std::size_t>(c.id());
            const State& st = agent_state[static_cast<std::size_t>(home[v])];
            for (const auto& inc : c.neighbors())
              if (mask[static_cast<std::size_t>(inc.edge)])
                c.send(inc.to, {word_of_int(out.cluster_of[v]), word_of(st.m), word_of_int(st.s)});
          },
          [&](Context& c) {
            const auto v = static_cast<std::size_t>(c.id());
            for (const auto& m : c.inbox()) {
              const std::int64_t B = int_of(m.words[0]);
              if (B == out.cluster_of[v]) continue;
              const State cand{real_of(m.words[1]) - 1.0, int_of(m.words[2])};
              if (!have[v] || better_state(cand, best[v])) best[v] = cand;
              have[v] = 1;
              offer(picks[v], cand.s, make_pick(g, g.find_edge(c.id(), m.from), cand.m, B));
            }
          });
      auto up = forest_upcast(engine, forest, [&](std::int32_t a, ChildValues ch) {
        bool any = false;
        State b{0, 0};
        auto take = [&](const State& s) {
          if (!any || better_state(s, b)) b = s;
          any = true;
        };
        for (const auto& [c, w] : ch)
          if (int_of(w[0])) take({real_of(w[1]), int_of(w[2])});
        const auto v = static_cast<std::size_t>(host[static_cast<std::size_t>(a)]);
        if (is_home[static_cast<std::size_t>(a)] && have[v]) take(best[v]);
        if (is_center[static_cast<std::size_t>(a)] && any && better_state(b, center_state[static_cast<std::size_t>(a)]))
          center_state[static_cast<std::size_t>(a)] = b;
        return std::vector<Word>{word_of_int(any ? 1 : 0), word_of(b.m), word_of_int(b.s)};
      });
      metrics += up.metrics;
      push_states();
    }

    std::vector<std::vector<KeyedItem>> initial(T);
    for (NodeId v = 0; v < n; ++v) {
      const auto vi = static_cast<std::size_t>(v);
      const double floor_val = agent_state[static_cast<std::size_t>(home[vi])].m - 1.0;
      for (const auto& [y, p] : picks[vi])
        if (p.val >= floor_val) initial[static_cast<std::size_t>(home[vi])].push_back({static_cast<Key>(y), encode_pick(p)});
    }
    auto cc = keyed_convergecast(engine, forest, std::move(initial), kPickMerge);
    metrics += cc.metrics;

    std::map<std::pair<std::int64_t, std::int64_t>, EdgeId> chosen;
    std::vector<std::vector<std::vector<Word>>> announce(T);
    bool crowded = false;
    for (std::size_t j = 0; j < T; ++j) {
      if (!is_center[j]) continue;
      std::set<EdgeId> mine;
      for (const auto& it : cc.value[j]) {
        const Pick p = decode_pick(it.value);
        mine.insert(p.e);
        chosen[{std::min<std::int64_t>(static_cast<std::int64_t>(j), p.nbr), std::max<std::int64_t>(static_cast<std::int64_t>(j), p.nbr)}] = p.e;
      }
      if (static_cast<double>(mine.size()) > per_cluster_cap) crowded = true;
      for (EdgeId e : mine) announce[j].push_back({word_of_int(e)});
    }
    metrics += forest_broadcast(engine, forest, std::move(announce)).metrics;

    const double limit = 4.0 * static_cast<double>(active.size()) *
                             std::pow(static_cast<double>(std::max<std::int64_t>(2, out.cluster_count)), 1.0 / k) + 1.0;
    const bool ok = !crowded && static_cast<double>(chosen.size()) <= limit;
    if (ok || attempt >= budget) {
      if (!ok) throw Error(ErrorKind::CapExceeded, "spanner scale " + std::to_string(scale) + ": retry budget exhausted");
      out.cluster_edges.clear();
      out.edges.clear();
      for (const auto& [pair, e] : chosen) {
        out.cluster_edges.push_back(pair);
        out.edges.push_back(e);
      }
      std::sort(out.edges.begin(), out.edges.end());
      out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
      break;
    }
  }
  return {std::move(out), metrics};
}

// ---------------------------------------------------------------- assembly

Run<SpannerResult> build_light_spanner(RoundEngine& engine, int k, double eps, NodeId root) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "build_light_spanner: k must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "build_light_spanner: eps must lie in (0, 1)");
  const WeightedGraph& g = engine.graph();
  const int n = g.n();
  RoundMetrics total;
  SpannerResult r;
  r.k = k;
  r.eps = eps;
  r.eps_internal = eps / kSpannerEpsDivisor;
  const std::uint64_t seed = engine.config().seed;

  auto frags = compute_fragments(engine, root);
  auto bfs = build_bfs_tree(engine, root);
  auto tour = euler_tour_from(engine, frags.value, bfs.value);
  r.stages.push_back({"tree_and_tour", frags.metrics + bfs.metrics + tour.metrics, frags.value.tree_edges().size(), 1});
  r.tree_edges = frags.value.tree_edges();
  r.tour_length = tour.value.length;
  r.buckets = bucket_edges(g, r.tour_length, r.eps_internal);

  // Light class: retried while the output exceeds the expected size by a wide margin.
  {
    const auto mask = edge_mask_of(g.m(), r.buckets.light);
    const double limit = 2.0 * k * std::pow(static_cast<double>(n), 1.0 + 1.0 / k);
    const int budget = attempt_budget(n);
    SpannerStage st{"light", {}, 0, 0};
    for (int attempt = 1;; ++attempt) {
      auto bs = baswana_sen(engine, mask, k, mix_hash(mix_hash(seed, 0x11), static_cast<std::uint64_t>(attempt)));
      st.metrics += bs.metrics;
      st.attempts = attempt;
      if (static_cast<double>(bs.value.size()) <= limit) {
        r.light_edges = std::move(bs.value);
        break;
      }
      if (attempt >= budget) throw Error(ErrorKind::CapExceeded, "light class spanner: retry budget exhausted");
    }
    st.edges = r.light_edges.size();
    r.stages.push_back(st);
  }

  const double boundary = case_boundary(n, k, r.eps_internal);
  for (int i = 0; i <= r.buckets.top; ++i) {
    if (r.buckets.scales[static_cast<std::size_t>(i)].empty()) continue;
    const std::uint64_t sseed = mix_hash(mix_hash(seed, 0x22), static_cast<std::uint64_t>(i));
    auto sc = i < boundary ? spanner_scale_case1(engine, tour.value, bfs.value, r.buckets, i, k, sseed)
                           : spanner_scale_case2(engine, tour.value, bfs.value, r.buckets, i, k, sseed);
    r.stages.push_back({"scale_" + std::to_string(i), sc.metrics, sc.value.edges.size(), sc.value.attempts});
    r.scales.push_back(std::move(sc.value));
  }

  std::vector<EdgeId> all = r.tree_edges;
  all.insert(all.end(), r.light_edges.begin(), r.light_edges.end());
  for (const auto& s : r.scales) all.insert(all.end(), s.edges.begin(), s.edges.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  r.edges = std::move(all);
  for (const auto& st : r.stages) total += st.metrics;
  return {std::move(r), total};
}

}  // namespace congest_light
