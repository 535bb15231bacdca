#include "congest_light/nets.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace congest_light {

Permutation Permutation::from_seed(int n, std::uint64_t seed) {
  Permutation p;
  p.seed = seed;
  p.key.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) p.key[static_cast<std::size_t>(v)] = mix_hash(seed, static_cast<std::uint64_t>(v));
  return p;
}

bool Permutation::before(NodeId u, NodeId v) const {
  const auto ku = key[static_cast<std::size_t>(u)], kv = key[static_cast<std::size_t>(v)];
  return ku < kv || (ku == kv && u < v);
}

std::vector<NodeId> Permutation::order(std::span<const char> members) const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < members.size(); ++v)
    if (members[v]) out.push_back(static_cast<NodeId>(v));
  std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) { return before(a, b); });
  return out;
}

namespace {

struct LeNode {
  const Permutation* perm = nullptr;
  bool member = false;
  std::size_t per_message = 1;
  std::vector<LeEntry> list;
  std::deque<LeEntry> queue;

  bool insert(NodeId u, double d) {
    for (const auto& e : list)
      if (e.dist <= d && (e.vertex == u || perm->before(e.vertex, u))) return false;
    std::erase_if(list, [&](const LeEntry& e) { return e.dist >= d && (e.vertex == u || perm->before(u, e.vertex)); });
    const LeEntry fresh{u, d};
    list.insert(std::upper_bound(list.begin(), list.end(), fresh,
                                 [](const LeEntry& a, const LeEntry& b) { return a.dist < b.dist; }),
                fresh);
    queue.push_back(fresh);
    return true;
  }

  void step(Context& c) {
    if (c.round() == 0) {
      if (member) insert(c.id(), 0.0);
    } else {
      auto nb = c.neighbors();
      for (const auto& m : c.inbox()) {
        auto it = std::lower_bound(nb.begin(), nb.end(), m.from, [](const Incident& x, NodeId t) { return x.to < t; });
        for (std::size_t i = 0; i + 1 < m.words.size(); i += 2)
          insert(static_cast<NodeId>(int_of(m.words[i])), real_of(m.words[i + 1]) + it->w);
      }
    }
    std::vector<Word> msg;
    while (!queue.empty() && msg.size() / 2 < per_message) {
      const LeEntry e = queue.front();
      queue.pop_front();
      if (std::find(list.begin(), list.end(), e) == list.end()) continue;  // superseded meanwhile
      msg.push_back(word_of_int(e.vertex));
      msg.push_back(word_of(e.dist));
    }
    if (!msg.empty())
      for (const auto& inc : c.neighbors()) c.send(inc.to, msg);
  }
  bool done() const { return queue.empty(); }
};

}  // namespace

Run<LeLists> compute_le_lists(RoundEngine& engine, const BfsTree& bfs, std::span<const char> members, std::uint64_t seed,
                              double delta) {
  const int n = engine.graph().n();
  if (members.size() != static_cast<std::size_t>(n)) throw Error(ErrorKind::InvalidArgument, "le lists: member mask size");
  if (std::none_of(members.begin(), members.end(), [](char c) { return c != 0; }))
    throw Error(ErrorKind::InvalidArgument, "le lists: empty member set");
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "le lists: delta must lie in [0, 1)");
  Run<LeLists> out;
  // One word from the root fixes the order everywhere.
  out.metrics += pipeline_broadcast(engine, bfs, {{bfs.root, {static_cast<Word>(seed)}}}).metrics;
  out.value.perm = Permutation::from_seed(n, seed);
  out.value.delta = delta;
  std::vector<LeNode> progs(static_cast<std::size_t>(n));
  const auto per_message = static_cast<std::size_t>(std::max(1, engine.config().word_budget / 2));
  for (int v = 0; v < n; ++v) {
    auto& p = progs[static_cast<std::size_t>(v)];
    p.perm = &out.value.perm;
    p.member = members[static_cast<std::size_t>(v)] != 0;
    p.per_message = per_message;
  }
  out.metrics += engine.run(progs);
  out.value.lists.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) out.value.lists[static_cast<std::size_t>(v)] = std::move(progs[static_cast<std::size_t>(v)].list);
  return out;
}

NetState initial_net_state(int n) {
  NetState s;
  s.active.assign(static_cast<std::size_t>(n), 1);
  return s;
}

Run<NetState> net_iteration(RoundEngine& engine, const BfsTree& bfs, NetState state, double radius, double delta,
                            std::uint64_t seed) {
  const int n = engine.graph().n();
  NetIterationLog log;
  log.seed = seed;
  log.active_before = std::count(state.active.begin(), state.active.end(), 1);
  if (log.active_before == 0) throw Error(ErrorKind::InvalidArgument, "net iteration: no active vertex");
  auto le = compute_le_lists(engine, bfs, state.active, seed, delta);
  log.metrics += le.metrics;
  // Admission is local: nothing else within the radius precedes v.
  for (NodeId v = 0; v < n; ++v) {
    if (!state.active[static_cast<std::size_t>(v)]) continue;
    const auto& l = le.value.lists[static_cast<std::size_t>(v)];
    if (l.size() < 2 || l[1].dist > radius) log.joined.push_back(v);
  }
  if (log.joined.empty()) throw Error(ErrorKind::Contract, "net iteration: no vertex joined");
  const double reach = (1.0 + delta) * radius;
  auto tree = bellman_ford(engine, log.joined, {}, reach);
  log.metrics += tree.metrics;
  for (NodeId v = 0; v < n; ++v) {
    auto& a = state.active[static_cast<std::size_t>(v)];
    if (a && tree.value.dist[static_cast<std::size_t>(v)] <= reach) {
      a = 0;
      ++log.deactivated;
    }
  }
  state.net.insert(state.net.end(), log.joined.begin(), log.joined.end());
  std::sort(state.net.begin(), state.net.end());
  state.last_tree = std::move(tree.value);
  ++state.iteration;
  const RoundMetrics metrics = log.metrics;
  state.log.push_back(std::move(log));
  return {std::move(state), metrics};
}

int net_iteration_cap(int n) {
  return std::max(1, static_cast<int>(std::ceil(kNetCapFactor * std::log2(std::max(2, n)))));
}

Run<NetResult> construct_net(RoundEngine& engine, double radius, double delta, NodeId root) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "net: delta must lie in (0, 1)");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "net: radius must be positive");
  auto bfs = build_bfs_tree(engine, root);
  auto out = construct_net_on(engine, bfs.value, radius, delta);
  out.metrics = bfs.metrics + out.metrics;
  return out;
}

Run<NetResult> construct_net_on(RoundEngine& engine, const BfsTree& bfs, double radius, double delta, std::uint64_t salt) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "net: radius must be positive");
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "net: delta must lie in [0, 1)");
  const int n = engine.graph().n();
  const std::uint64_t base = salt == 0 ? engine.config().seed : mix_hash(engine.config().seed, salt);
  Run<NetResult> out;
  NetState state = initial_net_state(n);
  const int cap = net_iteration_cap(n);
  while (std::find(state.active.begin(), state.active.end(), 1) != state.active.end()) {
    if (state.iteration >= cap)
      throw NetCapExceeded("net: iteration cap " + std::to_string(cap) + " reached with active vertices left", std::move(state));
    const std::uint64_t seed = mix_hash(base, static_cast<std::uint64_t>(state.iteration) + 1);
    auto it = net_iteration(engine, bfs, std::move(state), radius, delta, seed);
    out.metrics += it.metrics;
    state = std::move(it.value);
  }
  out.value.radius = radius;
  out.value.delta = delta;
  out.value.net = state.net;
  out.value.iterations = state.iteration;
  out.value.log = std::move(state.log);
  return out;
}

HalvingStats halving_experiment(const WeightedGraph& g, double radius, double delta, std::span<const std::uint64_t> seeds) {
  if (g.n() > 1000) throw Error(ErrorKind::InvalidArgument, "halving experiment: n must be <= 1000");
  const auto apsp = apsp_oracle(g);
  const int n = g.n();
  HalvingStats stats;
  auto close_pairs = [&](const std::vector<char>& active) {
    std::int64_t c = 0;
    for (NodeId u = 0; u < n; ++u)
      if (active[static_cast<std::size_t>(u)])
        for (NodeId v = u + 1; v < n; ++v)
          if (active[static_cast<std::size_t>(v)] && apsp(u, v) <= radius) ++c;
    return c;
  };
  for (auto seed : seeds) {
    EngineConfig cfg;
    cfg.seed = seed;
    RoundEngine engine(g, cfg);
    auto bfs = build_bfs_tree(engine, 0).value;
    NetState state = initial_net_state(n);
    std::vector<std::int64_t> counts;
    const int cap = net_iteration_cap(n);
    while (std::find(state.active.begin(), state.active.end(), 1) != state.active.end()) {
      if (state.iteration >= cap) throw NetCapExceeded("halving experiment: iteration cap reached", std::move(state));
      counts.push_back(close_pairs(state.active));
      const std::uint64_t s = mix_hash(seed, static_cast<std::uint64_t>(state.iteration) + 1);
      state = net_iteration(engine, bfs, std::move(state), radius, delta, s).value;
    }
    counts.push_back(0);
    stats.max_iterations = std::max(stats.max_iterations, state.iteration);
    stats.pairs.push_back(std::move(counts));
  }
  std::size_t longest = 0;
  for (const auto& c : stats.pairs) longest = std::max(longest, c.size());
  std::vector<double> sums(longest, 0.0);
  for (const auto& c : stats.pairs)
    for (std::size_t i = 0; i < c.size(); ++i) sums[i] += static_cast<double>(c[i]);
  double num = 0, den = 0;
  for (std::size_t i = 1; i < longest; ++i) {
    stats.ratio.push_back(sums[i - 1] > 0 ? sums[i] / sums[i - 1] : 0.0);
    num += sums[i];
    den += sums[i - 1];
  }
  stats.pooled_ratio = den > 0 ? num / den : 0.0;
  return stats;
}

}  // namespace congest_light
