#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "congest_light/doubling.hpp"
#include "congest_light/euler_tour.hpp"
#include "congest_light/light_spanner.hpp"
#include "congest_light/nets.hpp"
#include "congest_light/slt.hpp"
#include "congest_light/verify.hpp"
#include "json.hpp"

namespace congest_light::cli {

namespace {

using Json = nlohmann::ordered_json;

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

struct Globals {
  std::uint64_t seed = 1;
  std::int64_t rounds_cap = EngineConfig{}.round_cap;
  bool strict = false;

  EngineConfig engine(std::uint64_t seed_override) const {
    return {.strict = strict, .round_cap = rounds_cap, .seed = seed_override};
  }
  EngineConfig engine() const { return engine(seed); }
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  f << text;
}

struct InputSpec {
  std::string path;
  std::string format = "auto";  // auto | graph | points
  double radius = 0.2;          // points only
};

struct Input {
  WeightedGraph graph;
  std::vector<Point> points;
};

// Edge lists open with a single-token vertex count; point files have two tokens per line.
bool looks_like_points(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    int count = 0;
    while (ls >> tok) ++count;
    return count == 2;
  }
  return false;
}

Input load_input(const InputSpec& spec) {
  const std::string text = read_file(spec.path);
  const bool points = spec.format == "points" || (spec.format == "auto" && looks_like_points(text));
  Input in;
  if (!points) {
    in.graph = parse_graph(text);
    return in;
  }
  in.points = parse_points(text);
  in.graph = WeightedGraph::from_edges(static_cast<int>(in.points.size()), geometric_edges(in.points, spec.radius));
  return in;
}

void add_input_options(CLI::App* sub, InputSpec& spec) {
  sub->add_option("--input", spec.path, "edge list or point file")->required();
  sub->add_option("--format", spec.format, "input format")->check(CLI::IsMember({"auto", "graph", "points"}));
  sub->add_option("--radius-connect", spec.radius, "connection radius for point input")->check(CLI::PositiveNumber);
}

std::vector<EdgeId> edges_from_file(const WeightedGraph& g, const std::string& path) {
  const auto h = parse_graph(read_file(path), {.normalize = false, .require_connected = false, .poly_exponent = 0});
  if (h.n() != g.n()) throw Error(ErrorKind::AuditFailure, "subgraph vertex count differs from the input graph");
  std::vector<EdgeId> out;
  for (const auto& e : h.edges()) {
    const EdgeId id = g.find_edge(e.u, e.v);
    if (id < 0)
      throw Error(ErrorKind::AuditFailure,
                  "subgraph edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is not in the input graph");
    out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> vertices_from_file(const std::string& path, int n) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<NodeId> out;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long v = -1;
    if (!(ls >> v) || v < 0 || v >= n) throw Error(ErrorKind::Parse, "bad vertex id in " + path);
    out.push_back(static_cast<NodeId>(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double root_stretch(const WeightedGraph& g, std::span<const EdgeId> tree, NodeId root) {
  const auto dt = tree_distances(g, tree, root);
  const auto dg = sssp_oracle(g, root);
  double worst = 1.0;
  for (NodeId v = 0; v < g.n(); ++v)
    if (v != root) worst = std::max(worst, dt[static_cast<std::size_t>(v)] / dg[static_cast<std::size_t>(v)]);
  return worst;
}

double weight_of(const WeightedGraph& g, std::span<const EdgeId> es) {
  double s = 0;
  for (EdgeId e : es) s += g.edge(e).w;
  return s;
}

Json metrics_json(const RoundMetrics& m) {
  Json j;
  j["rounds"] = m.rounds_used;
  j["messages"] = m.total_messages;
  j["max_words_per_edge_round"] = m.max_words_per_edge_round;
  j["budget_violations"] = m.budget_violations;
  return j;
}

Json deviations_json(Algorithm a) {
  Json arr = Json::array();
  for (auto s : substitutes_used(a)) arr.push_back({{"name", substitute_name(s)}, {"note", substitute_note(s)}});
  return arr;
}

Json report_json(const AuditReport& r) { return Json::parse(report_to_json(r)); }

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

struct AuditSpec {
  std::string mode = "per_edge";
  std::int64_t samples = kAuditSamples;

  AuditOptions options() const {
    return {.mode = mode == "sampled" ? StretchMode::SampledPairs : StretchMode::PerEdge, .samples = samples};
  }
};

void add_audit_options(CLI::App* sub, AuditSpec& spec) {
  sub->add_option("--audit-mode", spec.mode, "stretch audit mode")->check(CLI::IsMember({"per_edge", "sampled"}));
  sub->add_option("--samples", spec.samples, "pairs for sampled audits")->check(CLI::PositiveNumber);
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string kind = "random_weighted";
  GenParams params;
  std::string out, points_out;
};

int cmd_gen(const Globals& gl, const GenArgs& a, std::ostream& out) {
  const auto inst = generate(parse_gen_kind(a.kind), a.params, gl.seed);
  const std::string text = to_edge_list(inst.graph);
  if (a.out.empty()) out << text;
  else write_text(a.out, text);
  if (!a.points_out.empty()) {
    if (inst.points.empty()) throw Error(ErrorKind::InvalidArgument, "--points-out needs a point generator");
    write_text(a.points_out, to_points_text(inst.points));
  }
  return kExitOk;
}

// ----------------------------------------------------------------- tour

int cmd_tour(const Globals& gl, const InputSpec& in, NodeId root, std::ostream& out) {
  const auto input = load_input(in);
  const auto& g = input.graph;
  RoundEngine eng(g, gl.engine());
  const auto tour = compute_euler_tour(eng, root);
  const double mst = mst_oracle(g).weight;
  Json j;
  j["n"] = g.n();
  j["m"] = g.m();
  j["root"] = root;
  j["length"] = tour.value.length;
  j["mst_weight"] = mst;
  const bool exact = std::abs(tour.value.length - 2 * mst) <= 1e-9 * std::max(1.0, mst);
  j["length_is_twice_mst"] = exact;
  j["metrics"] = metrics_json(tour.metrics);
  j["deviations"] = deviations_json(Algorithm::Tour);
  j["tour"] = Json::parse(tour_to_json(tour.value));
  emit(out, j);
  return exact ? kExitOk : kExitAuditFailure;
}

// ------------------------------------------------------------------ slt

struct SltArgs {
  NodeId root = 0;
  double eps = 0.5;
  double gamma = 0.0;  // > 0 switches to the lightness/stretch tradeoff
  std::string edges_out;
};

int cmd_slt(const Globals& gl, const InputSpec& in, const SltArgs& a, std::ostream& out) {
  const auto input = load_input(in);
  const auto& g = input.graph;
  RoundEngine eng(g, gl.engine());
  const double mst = mst_oracle(g).weight;
  Json j;
  j["n"] = g.n();
  j["m"] = g.m();
  j["root"] = a.root;
  std::vector<EdgeId> tree;
  RoundMetrics metrics;
  double stretch_bound = 0, light_bound = 0;
  if (a.gamma > 0) {
    const auto r = lightness_tradeoff(eng, a.root, a.gamma);
    tree = r.value.tree_edges;
    metrics = r.metrics;
    j["mode"] = "tradeoff";
    j["gamma"] = a.gamma;
    j["delta"] = r.value.delta;
    stretch_bound = 2 * kBaseLightness / a.gamma;
    light_bound = 1 + a.gamma;
  } else {
    const auto r = build_slt(eng, a.root, a.eps);
    tree = r.value.tree_edges;
    metrics = r.metrics;
    j["mode"] = "slt";
    j["eps"] = a.eps;
    j["eps_internal"] = r.value.eps_internal;
    j["breakpoints"] = r.value.breakpoints.all().size();
    j["h_edges"] = r.value.h_edges.size();
    stretch_bound = 1 + a.eps;
    light_bound = 2 + 4 / r.value.eps_internal;
  }
  const double stretch = root_stretch(g, tree, a.root);
  const double lightness = weight_of(g, tree) / mst;
  j["root_stretch"] = number(stretch);
  j["root_stretch_bound"] = stretch_bound;
  j["lightness"] = lightness;
  j["lightness_bound"] = light_bound;
  j["tree_edges"] = tree.size();
  j["metrics"] = metrics_json(metrics);
  j["deviations"] = deviations_json(Algorithm::Slt);
  if (!a.edges_out.empty()) write_text(a.edges_out, to_edge_list(g.subgraph(tree)));
  emit(out, j);
  return stretch <= stretch_bound && lightness <= light_bound ? kExitOk : kExitAuditFailure;
}

// -------------------------------------------------------------- spanner

struct SpannerArgs {
  NodeId root = 0;
  int k = 2;
  double eps = 0.5;
  std::string edges_out;
};

int cmd_spanner(const Globals& gl, const InputSpec& in, const SpannerArgs& a, const AuditSpec& au,
                std::ostream& out) {
  const auto input = load_input(in);
  const auto& g = input.graph;
  RoundEngine eng(g, gl.engine());
  const auto r = build_light_spanner(eng, a.k, a.eps, a.root);
  auto report = audit_spanner(g, r.value.edges, au.options());
  attach_run(report, r.metrics, Algorithm::Spanner);
  const double bound = (2 * a.k - 1) * (1 + kStretchSlope * a.eps);
  Json j;
  j["n"] = g.n();
  j["m"] = g.m();
  j["k"] = a.k;
  j["eps"] = a.eps;
  j["eps_internal"] = r.value.eps_internal;
  j["stretch_bound"] = bound;
  j["scales"] = r.value.scales.size();
  Json stages = Json::array();
  for (const auto& s : r.value.stages)
    stages.push_back({{"name", s.name}, {"rounds", s.metrics.rounds_used}, {"attempts", s.attempts}});
  j["stages"] = stages;
  j["metrics"] = metrics_json(r.metrics);
  j["audit"] = report_json(report);
  if (!a.edges_out.empty()) write_text(a.edges_out, to_edge_list(g.subgraph(r.value.edges)));
  emit(out, j);
  return report.max_stretch <= bound ? kExitOk : kExitAuditFailure;
}

// ------------------------------------------------------------------ net

struct NetArgs {
  NodeId root = 0;
  double radius = 1.0;
  double delta = 0.1;
  std::string net_out;
};

int cmd_net(const Globals& gl, const InputSpec& in, const NetArgs& a, std::ostream& out) {
  const auto input = load_input(in);
  const auto& g = input.graph;
  RoundEngine eng(g, gl.engine());
  const auto r = construct_net(eng, a.radius, a.delta, a.root);
  const auto audit = audit_net(g, r.value.net, (1 + a.delta) * a.radius, a.radius / (1 + a.delta));
  const int cap = net_iteration_cap(g.n());
  Json j;
  j["n"] = g.n();
  j["radius"] = a.radius;
  j["delta"] = a.delta;
  j["net_size"] = r.value.net.size();
  j["iterations"] = r.value.iterations;
  j["iteration_cap"] = cap;
  j["net"] = r.value.net;
  j["metrics"] = metrics_json(r.metrics);
  j["deviations"] = deviations_json(Algorithm::Net);
  j["audit"] = Json::parse(net_audit_to_json(audit));
  if (!a.net_out.empty()) {
    std::ostringstream os;
    for (NodeId v : r.value.net) os << v << '\n';
    write_text(a.net_out, os.str());
  }
  emit(out, j);
  return audit.ok && r.value.iterations <= cap ? kExitOk : kExitAuditFailure;
}

// ------------------------------------------------------------- doubling

struct DoublingArgs {
  NodeId root = 0;
  double eps = 0.2;
  double alpha = 2.0;
  bool distributed_l = false;
  std::string edges_out;
};

int cmd_doubling(const Globals& gl, const InputSpec& in, const DoublingArgs& a, const AuditSpec& au,
                 std::ostream& out) {
  const auto input = load_input(in);
  const auto& g = input.graph;
  RoundEngine eng(g, gl.engine());
  const auto r = build_doubling_spanner(eng, a.eps, {.root = a.root, .distributed_mst_weight = a.distributed_l});
  AuditOptions opts = au.options();
  opts.mode = StretchMode::SampledPairs;
  auto sampled = audit_spanner(g, r.value.edges, opts);
  attach_run(sampled, r.metrics, Algorithm::Doubling);
  RoundEngine psi_eng(g, gl.engine());
  const auto psi = mst_weight_estimator(psi_eng, a.alpha, a.root);
  const double mst = mst_oracle(g).weight;

  Json j;
  j["n"] = g.n();
  j["m"] = g.m();
  j["eps"] = a.eps;
  j["eps_internal"] = r.value.eps_internal;
  j["stretch_sampled_max"] = number(sampled.max_stretch_sampled);
  j["lightness"] = number(sampled.lightness);
  j["edges"] = sampled.edge_count;
  j["mst_weight"] = r.value.mst_weight;
  Json scales = Json::array();
  for (const auto& s : r.value.scales)
    scales.push_back({{"delta", s.delta}, {"net_size", s.net.size()}, {"added_weight", s.added_weight}});
  j["per_scale"] = scales;
  Json p;
  p["alpha"] = psi.value.alpha;
  p["psi"] = psi.value.psi;
  p["exponents"] = psi.value.exponents;
  p["net_sizes"] = psi.value.net_sizes;
  p["ratio_to_mst"] = psi.value.psi / mst;
  p["rounds"] = psi.metrics.rounds_used;
  j["psi"] = p;
  j["warnings"] = r.value.warnings;
  j["metrics"] = metrics_json(r.metrics);
  j["audit"] = report_json(sampled);
  if (!a.edges_out.empty()) write_text(a.edges_out, to_edge_list(g.subgraph(r.value.edges)));
  emit(out, j);
  return sampled.max_stretch_sampled <= 1 + a.eps ? kExitOk : kExitAuditFailure;
}

// ---------------------------------------------------------------- audit

struct AuditArgs {
  std::string spanner, net;
  double max_stretch = 0, max_lightness = 0;  // 0 disables the check
  double cover = 0, sep = 0;
};

int cmd_audit(const InputSpec& in, const AuditArgs& a, const AuditSpec& au, std::ostream& out) {
  const auto input = load_input(in);
  const auto& g = input.graph;
  if (a.spanner.empty() == a.net.empty()) throw Error(ErrorKind::InvalidArgument, "audit needs exactly one of --spanner, --net");
  if (!a.spanner.empty()) {
    const auto h = edges_from_file(g, a.spanner);
    const auto r = audit_spanner(g, h, au.options());
    Json j = report_json(r);
    bool ok = true;
    if (a.max_stretch > 0) ok &= r.max_stretch <= a.max_stretch;
    if (a.max_lightness > 0) ok &= r.lightness <= a.max_lightness;
    j["pass"] = ok;
    emit(out, j);
    return ok ? kExitOk : kExitAuditFailure;
  }
  const auto net = vertices_from_file(a.net, g.n());
  const double cover = a.cover > 0 ? a.cover : std::numeric_limits<double>::infinity();
  const auto r = audit_net(g, net, cover, a.sep);
  emit(out, Json::parse(net_audit_to_json(r)));
  return r.ok ? kExitOk : kExitAuditFailure;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string algo = "spanner";
  std::string kind = "random_weighted";
  std::vector<int> ns{256};
  std::vector<int> ks{2};
  std::vector<double> epss{0.5};
  int seeds = 5;
  double p = 0.0;       // 0: 3 ln n / n
  double radius = 0.0;  // 0: sqrt(3 ln n / (pi n))
  double net_radius = 4.0;
  double delta = 0.1;
  std::string out;
};

struct BenchRow {
  int n = 0;
  std::uint64_t seed = 0;
  std::int64_t rounds = 0;
  double lightness = AuditReport::kUnset;
  double max_stretch = AuditReport::kUnset;
  std::size_t edges = 0;
  int k = 0;
  double eps = 0;
};

BenchRow bench_cell(const Globals& gl, const BenchArgs& a, int n, int k, double eps, std::uint64_t seed) {
  GenParams gp;
  gp.n = n;
  gp.p = a.p > 0 ? a.p : std::min(1.0, 3.0 * std::log(n) / n);
  gp.radius = a.radius > 0 ? a.radius : std::sqrt(3.0 * std::log(n) / (M_PI * n));
  const auto inst = generate(parse_gen_kind(a.kind), gp, seed);
  const auto& g = inst.graph;
  RoundEngine eng(g, gl.engine(seed));
  BenchRow row{.n = n, .seed = seed, .k = k, .eps = eps};
  const AuditOptions audit{};
  if (a.algo == "tour") {
    const auto r = compute_euler_tour(eng, 0);
    const auto mst = mst_oracle(g);
    row.rounds = r.metrics.rounds_used;
    row.lightness = r.value.length / (2 * mst.weight);
    row.max_stretch = root_stretch(g, mst.edges, 0);
    row.edges = mst.edges.size();
  } else if (a.algo == "slt") {
    const auto r = build_slt(eng, 0, eps);
    row.rounds = r.metrics.rounds_used;
    row.lightness = weight_of(g, r.value.tree_edges) / mst_oracle(g).weight;
    row.max_stretch = root_stretch(g, r.value.tree_edges, 0);
    row.edges = r.value.tree_edges.size();
  } else if (a.algo == "spanner") {
    const auto r = build_light_spanner(eng, k, eps);
    const auto rep = audit_spanner(g, r.value.edges, audit);
    row.rounds = r.metrics.rounds_used;
    row.lightness = rep.lightness;
    row.max_stretch = rep.max_stretch;
    row.edges = rep.edge_count;
  } else if (a.algo == "net") {
    const auto r = construct_net(eng, a.net_radius, a.delta);
    const auto rep = audit_net(g, r.value.net, (1 + a.delta) * a.net_radius, a.net_radius / (1 + a.delta));
    row.rounds = r.metrics.rounds_used;
    row.max_stretch = rep.covering_radius / a.net_radius;
    row.edges = r.value.net.size();
  } else {
    const auto r = build_doubling_spanner(eng, eps);
    const auto rep = audit_spanner(g, r.value.edges, audit);
    row.rounds = r.metrics.rounds_used;
    row.lightness = rep.lightness;
    row.max_stretch = rep.max_stretch;
    row.edges = rep.edge_count;
  }
  return row;
}

unsigned thread_budget(std::size_t cells) {
  unsigned t = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CONGEST_LIGHT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) t = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(1, cells)));
}

std::string csv_number(double x) {
  if (!std::isfinite(x)) return "";
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

int cmd_bench(const Globals& gl, const BenchArgs& a, std::ostream& out) {
  struct Cell {
    int n, k;
    double eps;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int n : a.ns)
    for (int k : a.ks)
      for (double eps : a.epss)
        for (int s = 0; s < a.seeds; ++s) cells.push_back({n, k, eps, gl.seed + static_cast<std::uint64_t>(s)});
  std::vector<BenchRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        rows[i] = bench_cell(gl, a, cells[i].n, cells[i].k, cells[i].eps, cells[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned threads = thread_budget(cells.size());
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::ostringstream csv;
  csv << kBenchColumns << '\n';
  for (const auto& r : rows)
    csv << r.n << ',' << r.seed << ',' << r.rounds << ',' << csv_number(r.lightness) << ','
        << csv_number(r.max_stretch) << ',' << r.edges << ',' << r.k << ',' << csv_number(r.eps) << '\n';
  if (a.out.empty()) out << csv.str();
  else write_text(a.out, csv.str());
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::AuditFailure: return kExitAuditFailure;
    case ErrorKind::Nontermination:
    case ErrorKind::CapExceeded: return kExitNontermination;
    case ErrorKind::InvalidArgument: return kExitUsage;
    default: return kExitError;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed light spanners, shallow-light trees and nets on a simulated CONGEST network"};
  app.require_subcommand(1);
  Globals gl;
  app.add_option("--seed", gl.seed, "run seed");
  app.add_option("--rounds-cap", gl.rounds_cap, "per-run round cap")->check(CLI::PositiveNumber);
  app.add_flag("--strict-congest", gl.strict, "fail on any per-edge word budget violation");

  auto* gen = app.add_subcommand("gen", "generate an instance as an edge list");
  GenArgs ga;
  gen->add_option("--kind", ga.kind, "random_weighted | unit_square_points | grid | path | star | random_tree | cycle");
  gen->add_option("--n", ga.params.n, "vertex count")->check(CLI::PositiveNumber);
  gen->add_option("--p", ga.params.p, "edge probability");
  gen->add_option("--radius", ga.params.radius, "connection radius");
  gen->add_option("--rows", ga.params.rows);
  gen->add_option("--cols", ga.params.cols);
  gen->add_option("--w-min", ga.params.w_min);
  gen->add_option("--w-max", ga.params.w_max);
  gen->add_flag("--unit-weights", ga.params.unit_weights);
  gen->add_flag("--integer-weights", ga.params.integer_weights);
  gen->add_option("--poly-exponent", ga.params.poly_exponent);
  gen->add_option("--out", ga.out, "write here instead of stdout");
  gen->add_option("--points-out", ga.points_out, "also write the sampled points");

  InputSpec in;
  NodeId root = 0;
  auto* tour = app.add_subcommand("tour", "distributed Euler tour of the MST");
  add_input_options(tour, in);
  tour->add_option("--root", root);

  auto* slt = app.add_subcommand("slt", "shallow-light tree, or the inverse tradeoff with --gamma");
  SltArgs sa;
  add_input_options(slt, in);
  slt->add_option("--root", sa.root);
  slt->add_option("--eps", sa.eps)->check(CLI::PositiveNumber);
  slt->add_option("--gamma", sa.gamma)->check(CLI::PositiveNumber);
  slt->add_option("--edges-out", sa.edges_out);

  AuditSpec au;
  auto* spanner = app.add_subcommand("spanner", "light (2k-1)(1+O(eps)) spanner");
  SpannerArgs spa;
  add_input_options(spanner, in);
  add_audit_options(spanner, au);
  spanner->add_option("--root", spa.root);
  spanner->add_option("--k", spa.k)->check(CLI::PositiveNumber);
  spanner->add_option("--eps", spa.eps)->check(CLI::PositiveNumber);
  spanner->add_option("--edges-out", spa.edges_out);

  auto* net = app.add_subcommand("net", "(1+delta)-approximate net");
  NetArgs na;
  add_input_options(net, in);
  net->add_option("--root", na.root);
  net->add_option("--radius", na.radius)->check(CLI::PositiveNumber);
  net->add_option("--delta", na.delta);
  net->add_option("--net-out", na.net_out);

  auto* dbl = app.add_subcommand("doubling", "light (1+eps)-spanner for doubling graphs");
  DoublingArgs da;
  add_input_options(dbl, in);
  add_audit_options(dbl, au);
  dbl->add_option("--root", da.root);
  dbl->add_option("--eps", da.eps);
  dbl->add_option("--alpha", da.alpha, "net slack of the MST weight estimate");
  dbl->add_flag("--distributed-mst-weight", da.distributed_l);
  dbl->add_option("--edges-out", da.edges_out);

  auto* audit = app.add_subcommand("audit", "audit a subgraph or a net against its input graph");
  AuditArgs aa;
  add_input_options(audit, in);
  add_audit_options(audit, au);
  audit->add_option("--spanner", aa.spanner, "subgraph edge list");
  audit->add_option("--net", aa.net, "net vertex ids, one per line");
  audit->add_option("--max-stretch", aa.max_stretch);
  audit->add_option("--max-lightness", aa.max_lightness);
  audit->add_option("--cover", aa.cover);
  audit->add_option("--sep", aa.sep);

  auto* bench = app.add_subcommand("bench", "sweep generated instances and write CSV");
  BenchArgs ba;
  bench->add_option("--algo", ba.algo)->check(CLI::IsMember({"tour", "slt", "spanner", "net", "doubling"}));
  bench->add_option("--kind", ba.kind);
  bench->add_option("--n", ba.ns, "comma-separated sizes")->delimiter(',');
  bench->add_option("--k", ba.ks)->delimiter(',');
  bench->add_option("--eps", ba.epss)->delimiter(',');
  bench->add_option("--seeds", ba.seeds, "seeds per cell, counting up from --seed")->check(CLI::PositiveNumber);
  bench->add_option("--p", ba.p);
  bench->add_option("--radius", ba.radius);
  bench->add_option("--net-radius", ba.net_radius);
  bench->add_option("--delta", ba.delta);
  bench->add_option("--out", ba.out);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(gl, ga, out);
    if (*tour) return cmd_tour(gl, in, root, out);
    if (*slt) return cmd_slt(gl, in, sa, out);
    if (*spanner) return cmd_spanner(gl, in, spa, au, out);
    if (*net) return cmd_net(gl, in, na, out);
    if (*dbl) return cmd_doubling(gl, in, da, au, out);
    if (*audit) return cmd_audit(in, aa, au, out);
    if (*bench) return cmd_bench(gl, ba, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace congest_light::cli
