// Acceptance run: one PASS/FAIL line per criterion. Exit code is nonzero when a blocking criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "congest_light/doubling.hpp"
#include "congest_light/euler_tour.hpp"
#include "congest_light/light_spanner.hpp"
#include "congest_light/mst_fragments.hpp"
#include "congest_light/nets.hpp"
#include "congest_light/slt.hpp"
#include "congest_light/verify.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace congest_light;
using namespace congest_light::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: none
  bool blocking;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double weight_of(const WeightedGraph& g, std::span<const EdgeId> es) {
  double s = 0;
  for (auto e : es) s += g.edge(e).w;
  return s;
}

double root_stretch(const WeightedGraph& g, std::span<const EdgeId> es, NodeId rt) {
  const auto dg = sssp_oracle(g, rt);
  const auto dt = tree_distances(g, es, rt);
  double worst = 1.0;
  for (NodeId v = 0; v < g.n(); ++v)
    if (v != rt) worst = std::max(worst, dt[static_cast<std::size_t>(v)] / dg[static_cast<std::size_t>(v)]);
  return worst;
}

double default_p(int n) { return std::min(1.0, 3.0 * std::log(n) / n); }
double default_radius(int n) { return std::sqrt(3.0 * std::log(n) / (M_PI * n)); }

/// First connected sample among seed, seed + 1000, ...
Instance connected(GenKind kind, GenParams gp, std::uint64_t seed) {
  for (int attempt = 0;; ++attempt) {
    try {
      return generate(kind, gp, seed + 1000u * static_cast<std::uint64_t>(attempt));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Disconnected || attempt == 50) throw;
    }
  }
}

WeightedGraph unit_square(int n, std::uint64_t seed, double radius) {
  GenParams gp;
  gp.n = n;
  gp.radius = radius;
  return connected(GenKind::UnitSquarePoints, gp, seed).graph;
}

WeightedGraph random_weighted(int n, double p, std::uint64_t seed) {
  GenParams gp;
  gp.n = n;
  gp.p = p;
  return connected(GenKind::RandomWeighted, gp, seed).graph;
}

WeightedGraph complete_graph(int n) {
  std::vector<Edge> es;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) es.push_back({u, v, 1.0});
  return WeightedGraph::from_edges(n, es);
}

/// Mixed family used by the net and LE-list criteria: paths, unit-square graphs, random graphs.
WeightedGraph mixed_instance(int index, int n) {
  const auto seed = static_cast<std::uint64_t>(100 + index);
  switch (index % 3) {
    case 0: {
      GenParams gp;
      gp.n = n;
      return generate(GenKind::Path, gp, seed).graph;
    }
    case 1: return unit_square(n, seed, 1.2 * default_radius(n));
    default: return random_weighted(n, default_p(n), seed);
  }
}

// ---------------------------------------------------------------- criteria

Outcome euler_tour_exactness() {
  Outcome o;
  int mismatches = 0, length_errors = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 10 + t * 10;
    const auto g = random_tree(n, 1000 + static_cast<std::uint64_t>(t));
    const NodeId rt = t % n;
    RoundEngine eng(g);
    const auto tour = compute_euler_tour(eng, rt).value;
    const auto mst = mst_oracle(g, rt);
    const auto ref = oracle_tour(g, mst.edges, rt);
    const auto seq = tour.sequence();
    bool same = seq.size() == ref.size();
    for (std::size_t i = 0; same && i < seq.size(); ++i)
      same = seq[i].index == static_cast<std::int64_t>(i) && seq[i].vertex == ref[i].vertex && seq[i].time == ref[i].time;
    mismatches += !same;
    length_errors += tour.length != 2 * mst.weight;
  }
  o.pass = mismatches == 0 && length_errors == 0;
  o.detail = fmt("100 trees n=10..1000; sequence mismatches=%d, L_tour != 2w(T) in %d", mismatches, length_errors);
  return o;
}

std::vector<WeightedGraph> slt_suite() {
  std::vector<WeightedGraph> suite;
  for (int t = 0; t < 50; ++t) {
    const int n = 100 + t * 14;
    suite.push_back(random_weighted(n, (1 + t % 3) * default_p(n), 2000 + static_cast<std::uint64_t>(t)));
  }
  return suite;
}

Outcome slt_guarantees() {
  Outcome o;
  const auto suite = slt_suite();
  std::ostringstream ss;
  for (double eps : {0.2, 0.5, 1.0}) {
    double worst_stretch = 0, worst_light = 0, bound_light = 0;
    for (const auto& g : suite) {
      RoundEngine eng(g);
      const auto r = build_slt(eng, 0, eps).value;
      const double s = root_stretch(g, r.tree_edges, 0);
      const double l = weight_of(g, r.tree_edges) / mst_oracle(g).weight;
      bound_light = 2 + 4 / r.eps_internal;
      worst_stretch = std::max(worst_stretch, s);
      worst_light = std::max(worst_light, l);
      if (s > 1 + eps || l > bound_light) o.pass = false;
    }
    ss << fmt("eps=%.1f stretch=%.4f/%.1f lightness=%.3f/%.0f; ", eps, worst_stretch, 1 + eps, worst_light, bound_light);
  }
  o.detail = "50 graphs n=100..786; " + ss.str();
  return o;
}

Outcome slt_tradeoff() {
  Outcome o;
  const auto suite = slt_suite();
  const double c_bound = 2 * kBaseLightness;
  std::ostringstream ss;
  for (double gamma : {0.1, 0.3}) {
    double worst_stretch = 0, worst_light = 0;
    for (const auto& g : suite) {
      RoundEngine eng(g);
      const auto r = lightness_tradeoff(eng, 0, gamma).value;
      const double s = root_stretch(g, r.tree_edges, 0);
      const double l = weight_of(g, r.tree_edges) / mst_oracle(g).weight;
      worst_stretch = std::max(worst_stretch, s);
      worst_light = std::max(worst_light, l);
      if (l > 1 + gamma || s > c_bound / gamma) o.pass = false;
    }
    ss << fmt("gamma=%.1f lightness=%.4f/%.1f stretch=%.3f (measured C=%.3f) / C/gamma=%.0f; ", gamma, worst_light,
              1 + gamma, worst_stretch, worst_stretch * gamma, c_bound / gamma);
  }
  o.pass = o.pass && c_bound <= 500;
  o.detail = fmt("C=%.0f; ", c_bound) + ss.str();
  return o;
}

Outcome light_spanner() {
  Outcome o;
  const double eps = 0.5;
  std::ostringstream ss;
  for (int k : {2, 3}) {
    const double stretch_bound = (2 * k - 1) * (1 + kStretchSlope * eps);
    double worst_stretch = 0, c1 = 0, c2 = 0;
    for (int t = 0; t < 30; ++t) {
      const int n = 200 + t * 800 / 29;
      const double p = std::min(0.5, (t % 3 == 0 ? 3.0 : t % 3 == 1 ? 12.0 : 40.0) * std::log(n) / n);
      const auto g = random_weighted(n, p, 3000 + static_cast<std::uint64_t>(t));
      RoundEngine eng(g, {.seed = static_cast<std::uint64_t>(t + 1)});
      const auto r = build_light_spanner(eng, k, eps).value;
      const auto a = audit_spanner(g, r.edges);
      worst_stretch = std::max(worst_stretch, a.max_stretch);
      c1 = std::max(c1, static_cast<double>(r.edges.size()) / (k * std::pow(n, 1.0 + 1.0 / k) / (eps * eps)));
      c2 = std::max(c2, a.lightness / (k * std::pow(n, 1.0 / k) / (eps * eps * eps)));
      if (a.max_stretch > stretch_bound) o.pass = false;
    }
    if (c1 > 64 || c2 > 64) o.pass = false;
    ss << fmt("k=%d stretch=%.3f/%.1f C1=%.4f C2=%.5f; ", k, worst_stretch, stretch_bound, c1, c2);
  }
  o.detail = "30 graphs n=200..1000, eps=0.5, c_s=2; " + ss.str();
  return o;
}

Outcome cluster_protocol_equivalence() {
  Outcome o;
  int scales = 0, mismatches = 0, empty_instances = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 100 + t * 10;
    const int k = 2 + t % 2;
    const double eps = t % 4 < 2 ? 0.25 : 0.5;
    const auto g = chorded_tree(n, 5 * n, 4000 + static_cast<std::uint64_t>(t));
    RoundEngine eng(g);
    auto frags = compute_fragments(eng, 0).value;
    const auto bfs = build_bfs_tree(eng, 0).value;
    const auto tour = euler_tour_from(eng, frags, bfs).value;
    const auto buckets = bucket_edges(g, tour.length, eps);
    const double boundary = case_boundary(n, k, eps);
    int checked = 0;
    for (int i = 0; i < boundary && i <= buckets.top; ++i) {
      const auto& scale = buckets.scales[static_cast<std::size_t>(i)];
      if (scale.empty()) continue;
      const auto sc = spanner_scale_case1(eng, tour, bfs, buckets, i, k, 100 + static_cast<std::uint64_t>(i)).value;
      const auto cg = cluster_graph(g, scale, sc.cluster_of, sc.cluster_count);
      mismatches += sc.cluster_edges != shifted_radius_protocol(cg, k, sc.radii);
      ++checked;
    }
    scales += checked;
    empty_instances += checked == 0;
  }
  o.pass = mismatches == 0 && empty_instances == 0;
  o.detail = fmt("50 chorded trees n=100..590, k in {2,3}; %d scales compared, %d mismatches, %d instances without a case-1 scale",
                 scales, mismatches, empty_instances);
  return o;
}

Outcome net_guarantees() {
  Outcome o;
  const double delta = 0.1;
  int runs = 0, failures = 0, cap_failures = 0, worst_iterations = 0;
  double worst_cover = 0, worst_sep = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 50; ++t) {
    const int n = 100 + t * 14;
    const auto g = mixed_instance(t, n);
    const auto d = apsp_oracle(g);
    double diam = 0;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) diam = std::max(diam, d(u, v));
    for (int j = 1; j <= 5; ++j) {
      const double radius = diam / std::pow(2.0, j);
      RoundEngine eng(g, {.seed = static_cast<std::uint64_t>(t * 5 + j)});
      const auto r = construct_net(eng, radius, delta).value;
      const auto a = audit_net(g, r.net, (1 + delta) * radius, radius / (1 + delta));
      ++runs;
      failures += !a.ok;
      cap_failures += r.iterations > kNetCapFactor * std::log2(n);
      worst_iterations = std::max(worst_iterations, r.iterations);
      worst_cover = std::max(worst_cover, a.covering_radius / radius);
      if (r.net.size() > 1) worst_sep = std::min(worst_sep, a.min_separation / radius);
    }
  }
  o.pass = failures == 0 && cap_failures == 0;
  o.detail = fmt("%d runs on paths/unit-square/random n=100..786, delta=0.1; cover/D max=%.4f (<= 1.1), "
                 "sep/D min=%.4f (> %.4f); audit failures=%d; max iterations=%d, over cap=%d",
                 runs, worst_cover, worst_sep, 1 / (1 + delta), failures, worst_iterations, cap_failures);
  return o;
}

Outcome le_exactness() {
  Outcome o;
  int mismatches = 0, long_lists = 0;
  std::size_t longest = 0;
  double longest_ratio = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 50 + t * 9;
    const auto g = mixed_instance(t + 1, n);
    const auto d = apsp_oracle(g);
    std::vector<char> members(static_cast<std::size_t>(n), 1);
    if (t % 2)
      for (std::size_t v = 0; v < members.size(); v += 3) members[v] = 0;
    RoundEngine eng(g);
    const auto bfs = build_bfs_tree(eng, 0).value;
    const auto le = compute_le_lists(eng, bfs, members, 5000 + static_cast<std::uint64_t>(t), 0.0).value;
    std::size_t local = 0;
    for (NodeId v = 0; v < n; ++v) {
      const auto& l = le.lists[static_cast<std::size_t>(v)];
      mismatches += l != oracle_le(d, le.perm, members, v);
      local = std::max(local, l.size());
    }
    longest = std::max(longest, local);
    longest_ratio = std::max(longest_ratio, static_cast<double>(local) / std::log(n));
    long_lists += static_cast<double>(local) > 4 * std::log(n);
  }
  o.pass = mismatches == 0 && long_lists == 0;
  o.detail = fmt("50 instances n=50..491; list mismatches=%d; longest list=%zu, max length/ln n=%.3f (<= 4)", mismatches,
                 longest, longest_ratio);
  return o;
}

Outcome halving() {
  Outcome o;
  std::vector<std::uint64_t> seeds(100);
  std::iota(seeds.begin(), seeds.end(), 1u);
  // Unit clique, and a clique with weights in [1, 2] where admission takes several iterations.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> draw(1.0, 2.0);
  std::vector<Edge> es;
  for (int u = 0; u < 50; ++u)
    for (int v = u + 1; v < 50; ++v) es.push_back({u, v, draw(rng)});
  const std::vector<std::tuple<const char*, WeightedGraph, double>> cases{
      {"unit clique", complete_graph(50), 1.0},
      {"weighted clique", WeightedGraph::from_edges(50, es, {.normalize = false}), 1.5}};
  std::ostringstream ss;
  for (const auto& [name, g, radius] : cases) {
    const auto s = halving_experiment(g, radius, 0.1, seeds);
    o.pass = o.pass && s.pooled_ratio <= 7.0 / 8.0;
    ss << fmt("%s n=50 radius=%.1f: pooled decay=%.4f (<= 0.875), per-iteration:", name, radius, s.pooled_ratio);
    for (double r : s.ratio) ss << fmt(" %.3f", r);
    ss << "; ";
  }
  o.detail = "100 seeds; " + ss.str();
  return o;
}

Outcome doubling() {
  Outcome o;
  const double eps = 0.2;
  std::ostringstream ss;
  for (int n : {128, 256, 512}) {
    const auto g = unit_square(n, 7, default_radius(n));
    RoundEngine eng(g);
    const auto r = build_doubling_spanner(eng, eps).value;
    const auto dg = apsp_oracle(g);
    std::vector<Edge> kept;
    for (auto e : r.edges) kept.push_back(g.edge(e));
    const auto h = WeightedGraph::from_edges(n, kept, {.normalize = false});
    const auto dh = apsp_oracle(h);
    double stretch = 1;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) stretch = std::max(stretch, dh(u, v) / dg(u, v));
    const double L = mst_oracle(g).weight;
    const double lightness = weight_of(g, r.edges) / L;
    const double light_bound = 32 * std::pow(eps, -4) * std::log2(n);
    int net_failures = 0;
    for (const auto& sc : r.scales) {
      const double sep = kDoublingNetRadius * r.eps_internal * sc.delta / (1.0 + kDoublingNetSlack);
      net_failures += !net_cardinality_audit(L, sc.net.size(), sep);
    }
    if (stretch > 1 + eps || lightness > light_bound || net_failures) o.pass = false;
    ss << fmt("n=%d stretch=%.4f lightness=%.3f (K_measured=%.5f) scales=%zu net-size failures=%d warnings=%zu; ", n,
              stretch, lightness, lightness / (std::pow(eps, -4) * std::log2(n)), r.scales.size(), net_failures,
              r.warnings.size());
  }
  o.detail = "unit square, eps=0.2, bound 1.2 and 32 eps^-4 log2 n; " + ss.str();
  return o;
}

Outcome psi_sandwich() {
  Outcome o;
  std::vector<std::pair<std::string, WeightedGraph>> suite;
  suite.emplace_back("path64", path_graph(64));
  suite.emplace_back("star40", star_graph(40));
  suite.emplace_back("clique50", complete_graph(50));
  suite.emplace_back("random200", random_weighted(200, default_p(200), 11));
  suite.emplace_back("random500", random_weighted(500, default_p(500), 12));
  suite.emplace_back("square256", unit_square(256, 13, default_radius(256)));
  suite.emplace_back("tree300", random_tree(300, 14));
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& [name, g] : suite)
    for (double alpha : {1.0, 2.0}) {
      RoundEngine eng(g);
      const auto p = mst_weight_estimator(eng, alpha).value;
      const double L = mst_oracle(g).weight;
      const double upper = kPsiConstant * alpha * std::log2(g.n()) * L;
      lo = std::min(lo, p.psi / L);
      hi = std::max(hi, p.psi / upper);
      if (p.psi < L || p.psi > upper) o.pass = false;
    }
  o.detail = fmt("%zu instances x alpha in {1,2}; min psi/L=%.3f (>= 1), max psi/(16 alpha log2 n L)=%.4f (<= 1)",
                 suite.size(), lo, hi);
  return o;
}

Outcome round_scaling() {
  Outcome o;
  std::vector<double> xs, ys;
  std::ostringstream ss;
  for (int n : {256, 1024, 4096}) {
    const auto g = random_weighted(n, default_p(n), 1);
    RoundEngine eng(g);
    const auto r = build_light_spanner(eng, 2, 0.5);
    xs.push_back(std::log(n));
    ys.push_back(std::log(static_cast<double>(r.metrics.rounds_used)));
    ss << fmt("n=%d rounds=%lld; ", n, static_cast<long long>(r.metrics.rounds_used));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  o.pass = slope <= 0.75;
  ss << fmt("fitted exponent=%.3f (<= 0.75); deviations:", slope);
  const std::pair<const char*, Algorithm> algos[]{{"tour", Algorithm::Tour},
                                                  {"slt", Algorithm::Slt},
                                                  {"spanner", Algorithm::Spanner},
                                                  {"net", Algorithm::Net},
                                                  {"doubling", Algorithm::Doubling}};
  for (const auto& [name, algo] : algos) {
    ss << " " << name << "=";
    const auto used = substitutes_used(algo);
    for (std::size_t i = 0; i < used.size(); ++i) ss << (i ? "+" : "") << substitute_name(used[i]);
  }
  o.detail = ss.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "euler_tour_exactness", 60, true, euler_tour_exactness},
      {2, "slt_guarantees", 300, true, slt_guarantees},
      {3, "slt_tradeoff", 0, true, slt_tradeoff},
      {4, "light_spanner", 600, true, light_spanner},
      {5, "cluster_protocol_equivalence", 0, true, cluster_protocol_equivalence},
      {6, "net_guarantees", 0, true, net_guarantees},
      {7, "le_list_exactness", 0, true, le_exactness},
      {8, "halving", 0, true, halving},
      {9, "doubling_spanner", 600, true, doubling},
      {10, "psi_sandwich", 0, true, psi_sandwich},
      {11, "round_scaling", 0, false, round_scaling},
  };
  int blocking_failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s == 0 || secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    std::string timing = fmt("%.1f s", secs);
    if (c.time_limit_s > 0) timing += fmt(" of %.0f s", c.time_limit_s);
    std::printf("criterion %2d %-22s %s%s [%s] %s\n", c.id, c.name, pass ? "PASS" : "FAIL",
                c.blocking ? "" : " (informative)", timing.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!pass && c.blocking) ++blocking_failures;
  }
  return blocking_failures == 0 ? 0 : 1;
}
