#include "congest_light/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

namespace congest_light {

bool edge_key_less(const Edge& a, const Edge& b) {
  if (a.w != b.w) return a.w < b.w;
  const NodeId a_lo = std::min(a.u, a.v), b_lo = std::min(b.u, b.v);
  if (a_lo != b_lo) return a_lo < b_lo;
  return std::max(a.u, a.v) < std::max(b.u, b.v);
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[static_cast<std::size_t>(x)] != x) {
      p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
      x = p[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

std::vector<NodeId> unreachable_from_zero(int n, const std::vector<Edge>& edges) {
  Dsu d(n);
  for (const auto& e : edges) d.unite(e.u, e.v);
  std::vector<NodeId> out;
  if (n == 0) return out;
  const int r = d.find(0);
  for (int v = 0; v < n; ++v)
    if (d.find(v) != r) out.push_back(v);
  return out;
}

std::string list_prefix(const std::vector<NodeId>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size() && i < 10; ++i) os << (i ? "," : "") << ids[i];
  if (ids.size() > 10) os << ",... (" << ids.size() << " total)";
  return os.str();
}

}  // namespace

WeightedGraph WeightedGraph::from_edges(int n, std::vector<Edge> edges, const GraphOptions& opts) {
  if (n <= 0) throw Error(ErrorKind::InvalidArgument, "graph must have at least one vertex");
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
    if (e.u == e.v) throw Error(ErrorKind::InvalidArgument, "self loop at vertex " + std::to_string(e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw Error(ErrorKind::InvalidArgument, "non-positive weight on edge " + std::to_string(e.u) + "-" +
                                                  std::to_string(e.v));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  {
    std::vector<std::pair<NodeId, NodeId>> keys;
    keys.reserve(edges.size());
    for (const auto& e : edges) keys.emplace_back(e.u, e.v);
    std::sort(keys.begin(), keys.end());
    auto it = std::adjacent_find(keys.begin(), keys.end());
    if (it != keys.end())
      throw Error(ErrorKind::InvalidArgument,
                  "duplicate edge " + std::to_string(it->first) + "-" + std::to_string(it->second));
  }
  WeightedGraph g;
  g.n_ = n;
  if (opts.normalize && !edges.empty()) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& e : edges) lo = std::min(lo, e.w);
    if (lo != 1.0) {
      for (auto& e : edges) e.w /= lo;
      g.scale_ = lo;
    }
  }
  if (opts.poly_exponent > 0.0 && n > 1) {
    const double cap = std::pow(static_cast<double>(n), opts.poly_exponent);
    for (const auto& e : edges)
      if (e.w > cap)
        throw Error(ErrorKind::InvalidArgument, "weight " + std::to_string(e.w) + " exceeds poly cap n^" +
                                                    std::to_string(opts.poly_exponent));
  }
  if (opts.require_connected) {
    auto miss = unreachable_from_zero(n, edges);
    if (!miss.empty())
      throw Error(ErrorKind::Disconnected, "graph is disconnected; unreachable from 0: " + list_prefix(miss));
  }
  g.edges_ = std::move(edges);
  std::vector<std::size_t> deg(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : g.edges_) {
    ++deg[static_cast<std::size_t>(e.u) + 1];
    ++deg[static_cast<std::size_t>(e.v) + 1];
  }
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) g.offsets_[i] = g.offsets_[i - 1] + deg[i];
  g.adj_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (EdgeId id = 0; id < static_cast<EdgeId>(g.edges_.size()); ++id) {
    const auto& e = g.edges_[static_cast<std::size_t>(id)];
    g.adj_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, e.w, id};
    g.adj_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, e.w, id};
  }
  for (int v = 0; v < n; ++v)
    std::sort(g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[static_cast<std::size_t>(v)]),
              g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[static_cast<std::size_t>(v) + 1]),
              [](const Incident& a, const Incident& b) { return a.to < b.to; });
  return g;
}

EdgeId WeightedGraph::find_edge(NodeId u, NodeId v) const {
  auto a = adj(u);
  auto it = std::lower_bound(a.begin(), a.end(), v, [](const Incident& x, NodeId t) { return x.to < t; });
  if (it != a.end() && it->to == v) return it->edge;
  return -1;
}

double WeightedGraph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.w;
  return s;
}

bool WeightedGraph::connected() const { return unreachable_from_zero(n_, edges_).empty(); }

WeightedGraph WeightedGraph::subgraph(std::span<const EdgeId> keep) const {
  std::vector<Edge> es;
  es.reserve(keep.size());
  for (EdgeId e : keep) es.push_back(edges_[static_cast<std::size_t>(e)]);
  GraphOptions o;
  o.normalize = false;
  o.require_connected = false;
  o.poly_exponent = 0.0;
  return from_edges(n_, std::move(es), o);
}

WeightedGraph WeightedGraph::reweighted(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) throw Error(ErrorKind::InvalidArgument, "weight vector size mismatch");
  std::vector<Edge> es = edges_;
  for (std::size_t i = 0; i < es.size(); ++i) es[i].w = weights[i];
  GraphOptions o;
  o.normalize = false;
  o.require_connected = false;
  o.poly_exponent = 0.0;
  return from_edges(n_, std::move(es), o);
}

// ------------------------------------------------------------------ parsing

WeightedGraph parse_graph(const std::string& text, const GraphOptions& opts) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  long long n = -1;
  std::vector<Edge> edges;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::Parse, "parse error at line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n) || n <= 0) fail("expected positive vertex count");
      std::string rest;
      if (ls >> rest) fail("unexpected trailing token '" + rest + "'");
      continue;
    }
    long long u = 0, v = 0;
    double w = 0.0;
    if (!(ls >> u >> v >> w)) fail("expected 'u v w'");
    std::string rest;
    if (ls >> rest) fail("unexpected trailing token '" + rest + "'");
    if (u < 0 || v < 0 || u >= n || v >= n) fail("vertex id out of range");
    if (u == v) fail("self loop");
    if (!(w > 0.0) || !std::isfinite(w)) fail("non-positive weight");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
  }
  if (n < 0) throw Error(ErrorKind::Parse, "parse error at line " + std::to_string(lineno + 1) + ": empty input");
  return WeightedGraph::from_edges(static_cast<int>(n), std::move(edges), opts);
}

WeightedGraph load_graph(const std::string& path, const GraphOptions& opts) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_graph(ss.str(), opts);
}

std::string to_edge_list(const WeightedGraph& g) {
  std::ostringstream os;
  os.precision(17);
  os << g.n() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << ' ' << e.w << '\n';
  return os.str();
}

std::vector<Point> parse_points(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Point p;
    std::string rest;
    if (!(ls >> p.first >> p.second) || (ls >> rest))
      throw Error(ErrorKind::Parse, "parse error at line " + std::to_string(lineno) + ": expected 'x y'");
    if (!std::isfinite(p.first) || !std::isfinite(p.second))
      throw Error(ErrorKind::Parse, "parse error at line " + std::to_string(lineno) + ": non-finite coordinate");
    pts.push_back(p);
  }
  if (pts.empty()) throw Error(ErrorKind::Parse, "parse error: no points");
  return pts;
}

std::string to_points_text(std::span<const Point> pts) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [x, y] : pts) os << x << ' ' << y << '\n';
  return os.str();
}

std::vector<Edge> geometric_edges(std::span<const Point> pts, double radius) {
  std::vector<Edge> es;
  const double r2 = radius * radius;
  const auto n = static_cast<NodeId>(pts.size());
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      const double dx = pts[static_cast<std::size_t>(a)].first - pts[static_cast<std::size_t>(b)].first;
      const double dy = pts[static_cast<std::size_t>(a)].second - pts[static_cast<std::size_t>(b)].second;
      const double d2 = dx * dx + dy * dy;
      if (d2 <= r2 && d2 > 0.0) es.push_back({a, b, std::sqrt(d2)});
    }
  return es;
}

// --------------------------------------------------------------- generators

GenKind parse_gen_kind(const std::string& name) {
  if (name == "random_weighted") return GenKind::RandomWeighted;
  if (name == "unit_square_points") return GenKind::UnitSquarePoints;
  if (name == "grid") return GenKind::Grid;
  if (name == "path") return GenKind::Path;
  if (name == "star") return GenKind::Star;
  if (name == "random_tree") return GenKind::RandomTree;
  if (name == "cycle") return GenKind::Cycle;
  throw Error(ErrorKind::InvalidArgument, "unknown generator kind '" + name + "'");
}

namespace {

class WeightDraw {
 public:
  WeightDraw(const GenParams& p, std::mt19937_64& rng) : p_(p), rng_(rng) {
    hi_ = p.w_max > 0 ? p.w_max : std::max(p.w_min, static_cast<double>(p.n));
  }
  double operator()() {
    if (p_.unit_weights) return 1.0;
    if (p_.integer_weights) {
      std::uniform_int_distribution<long long> d(static_cast<long long>(p_.w_min), static_cast<long long>(hi_));
      return static_cast<double>(d(rng_));
    }
    std::uniform_real_distribution<double> d(p_.w_min, hi_);
    return d(rng_);
  }
  void pin(std::vector<Edge>& es) {
    if (!p_.integer_weights || es.empty()) return;
    std::uniform_int_distribution<std::size_t> d(0, es.size() - 1);
    es[d(rng_)].w = p_.w_min;
  }

 private:
  const GenParams& p_;
  std::mt19937_64& rng_;
  double hi_;
};

GraphOptions gen_options(const GenParams& p) {
  GraphOptions o;
  o.poly_exponent = p.poly_exponent;
  return o;
}

}  // namespace

Instance generate(GenKind kind, const GenParams& params, std::uint64_t seed) {
  const int n = params.n;
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  std::mt19937_64 rng(seed);
  WeightDraw draw(params, rng);
  Instance inst;
  std::vector<Edge> es;
  switch (kind) {
    case GenKind::Path:
      for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1, draw()});
      inst.ddim = 1;
      break;
    case GenKind::Cycle:
      if (n < 3) throw Error(ErrorKind::InvalidArgument, "cycle needs n >= 3");
      for (int i = 0; i < n; ++i) es.push_back({i, (i + 1) % n, draw()});
      inst.ddim = 1;
      break;
    case GenKind::Star:
      for (int i = 1; i < n; ++i) es.push_back({0, i, draw()});
      break;
    case GenKind::Grid: {
      int rows = params.rows, cols = params.cols;
      if (rows <= 0 || cols <= 0) {
        rows = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))));
        cols = (n + rows - 1) / rows;
        if (rows * cols != n) throw Error(ErrorKind::InvalidArgument, "grid: give rows/cols or a perfect rectangle n");
      }
      if (rows * cols != n) throw Error(ErrorKind::InvalidArgument, "grid: rows*cols must equal n");
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          const int id = r * cols + c;
          if (c + 1 < cols) es.push_back({id, id + 1, draw()});
          if (r + 1 < rows) es.push_back({id, id + cols, draw()});
        }
      inst.ddim = 2;
      break;
    }
    case GenKind::RandomTree: {
      std::vector<NodeId> label(static_cast<std::size_t>(n));
      std::iota(label.begin(), label.end(), 0);
      std::shuffle(label.begin(), label.end(), rng);
      for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> d(0, i - 1);
        es.push_back({label[static_cast<std::size_t>(d(rng))], label[static_cast<std::size_t>(i)], draw()});
      }
      break;
    }
    case GenKind::RandomWeighted: {
      constexpr int kAttempts = 64;
      std::bernoulli_distribution coin(std::clamp(params.p, 0.0, 1.0));
      for (int attempt = 0;; ++attempt) {
        es.clear();
        for (int u = 0; u < n; ++u)
          for (int v = u + 1; v < n; ++v)
            if (coin(rng)) es.push_back({u, v, draw()});
        if (unreachable_from_zero(n, es).empty()) break;
        if (attempt + 1 == kAttempts)
          throw Error(ErrorKind::Disconnected, "disconnected sample after retries; increase p");
      }
      break;
    }
    case GenKind::UnitSquarePoints: {
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      inst.points.resize(static_cast<std::size_t>(n));
      for (auto& pt : inst.points) pt = {u01(rng), u01(rng)};
      es = geometric_edges(inst.points, params.radius);
      if (!unreachable_from_zero(n, es).empty())
        throw Error(ErrorKind::Disconnected, "disconnected sample: increase radius above " + std::to_string(params.radius));
      inst.ddim = 2;
      break;
    }
  }
  if (kind != GenKind::UnitSquarePoints) draw.pin(es);
  inst.graph = WeightedGraph::from_edges(n, std::move(es), gen_options(params));
  return inst;
}

// ------------------------------------------------------------------ oracles

MstResult mst_oracle(const WeightedGraph& g, NodeId root) {
  std::vector<EdgeId> order(g.m());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return edge_key_less(g.edge(a), g.edge(b)); });
  Dsu d(g.n());
  MstResult r;
  r.root = root;
  for (EdgeId e : order)
    if (d.unite(g.edge(e).u, g.edge(e).v)) {
      r.edges.push_back(e);
      r.weight += g.edge(e).w;
    }
  if (static_cast<int>(r.edges.size()) != g.n() - 1)
    throw Error(ErrorKind::Disconnected, "mst_oracle: graph is disconnected");
  std::sort(r.edges.begin(), r.edges.end());
  r.parent.assign(static_cast<std::size_t>(g.n()), kNoNode);
  r.parent_edge.assign(static_cast<std::size_t>(g.n()), -1);
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> tadj(static_cast<std::size_t>(g.n()));
  for (EdgeId e : r.edges) {
    tadj[static_cast<std::size_t>(g.edge(e).u)].push_back({g.edge(e).v, e});
    tadj[static_cast<std::size_t>(g.edge(e).v)].push_back({g.edge(e).u, e});
  }
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::vector<NodeId> stack{root};
  seen[static_cast<std::size_t>(root)] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (auto [to, e] : tadj[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(to)]) {
        seen[static_cast<std::size_t>(to)] = 1;
        r.parent[static_cast<std::size_t>(to)] = v;
        r.parent_edge[static_cast<std::size_t>(to)] = e;
        stack.push_back(to);
      }
  }
  return r;
}

std::vector<double> multi_source_oracle(const WeightedGraph& g, std::span<const NodeId> sources) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(g.n()), inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (NodeId s : sources) {
    dist[static_cast<std::size_t>(s)] = 0.0;
    pq.push({0.0, s});
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (const auto& inc : g.adj(v)) {
      const double nd = d + inc.w;
      if (nd < dist[static_cast<std::size_t>(inc.to)]) {
        dist[static_cast<std::size_t>(inc.to)] = nd;
        pq.push({nd, inc.to});
      }
    }
  }
  return dist;
}

std::vector<double> sssp_oracle(const WeightedGraph& g, NodeId source) {
  const NodeId s[] = {source};
  return multi_source_oracle(g, s);
}

DistanceMatrix apsp_oracle(const WeightedGraph& g, int cap) {
  if (g.n() > cap)
    throw Error(ErrorKind::CapExceeded, "apsp over cap (n=" + std::to_string(g.n()) + " > " + std::to_string(cap) +
                                            "); use sampled pairs");
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(g.n()) * static_cast<std::size_t>(g.n()));
  for (NodeId s = 0; s < g.n(); ++s) {
    auto row = sssp_oracle(g, s);
    all.insert(all.end(), row.begin(), row.end());
  }
  return DistanceMatrix(g.n(), std::move(all));
}

std::vector<int> hop_distances(const WeightedGraph& g, NodeId source) {
  std::vector<int> d(static_cast<std::size_t>(g.n()), -1);
  std::queue<NodeId> q;
  d[static_cast<std::size_t>(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    for (const auto& inc : g.adj(v))
      if (d[static_cast<std::size_t>(inc.to)] < 0) {
        d[static_cast<std::size_t>(inc.to)] = d[static_cast<std::size_t>(v)] + 1;
        q.push(inc.to);
      }
  }
  return d;
}

std::vector<double> tree_distances(const WeightedGraph& g, std::span<const EdgeId> tree_edges, NodeId source) {
  return sssp_oracle(g.subgraph(tree_edges), source);
}

}  // namespace congest_light
