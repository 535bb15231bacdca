#include "congest_light/primitives.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace congest_light {

int BfsTree::height() const {
  int h = 0;
  for (int d : depth) h = std::max(h, d);
  return h;
}

// ---------------------------------------------------------------------- BFS

namespace {

struct BfsNode {
  NodeId self = 0;
  bool is_root = false;
  NodeId parent = kNoNode;
  int depth = -1;
  std::vector<NodeId> children;

  void step(Context& c) {
    if (c.round() == 0 && is_root) {
      depth = 0;
      announce(c);
      return;
    }
    bool adopted = false;
    for (const auto& m : c.inbox()) {
      const int d = static_cast<int>(int_of(m.words[0]));
      const NodeId p = static_cast<NodeId>(int_of(m.words[1]));
      if (p == self) children.push_back(m.from);
      if (depth < 0) {
        depth = d + 1;
        parent = m.from;  // inbox is sorted by sender, so the smallest id wins
        adopted = true;
      }
    }
    if (adopted) announce(c);
  }
  void announce(Context& c) const {
    for (const auto& inc : c.neighbors()) c.send(inc.to, {word_of_int(depth), word_of_int(parent)});
  }
  bool done() const { return true; }
};

}  // namespace

Run<BfsTree> build_bfs_tree(RoundEngine& engine, NodeId root) {
  const int n = engine.graph().n();
  if (root < 0 || root >= n) throw Error(ErrorKind::InvalidArgument, "bfs root out of range");
  std::vector<BfsNode> progs(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    progs[static_cast<std::size_t>(v)].self = v;
    progs[static_cast<std::size_t>(v)].is_root = (v == root);
  }
  Run<BfsTree> out;
  out.metrics = engine.run(progs);
  std::vector<NodeId> missing;
  out.value.root = root;
  out.value.parent.resize(static_cast<std::size_t>(n));
  out.value.depth.resize(static_cast<std::size_t>(n));
  out.value.children.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto& p = progs[static_cast<std::size_t>(v)];
    if (p.depth < 0) missing.push_back(v);
    out.value.parent[static_cast<std::size_t>(v)] = p.parent;
    out.value.depth[static_cast<std::size_t>(v)] = p.depth;
    std::sort(p.children.begin(), p.children.end());
    out.value.children[static_cast<std::size_t>(v)] = std::move(p.children);
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "unreachable vertex:";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) os << ' ' << missing[i];
    if (missing.size() > 20) os << " ... (" << missing.size() << " total)";
    throw Error(ErrorKind::Disconnected, os.str());
  }
  return out;
}

// ------------------------------------------------------------- AgentForest

AgentForest::AgentForest(std::vector<NodeId> host, std::vector<std::int32_t> parent)
    : host_(std::move(host)), parent_(std::move(parent)) {
  if (host_.size() != parent_.size()) throw Error(ErrorKind::InvalidArgument, "forest: size mismatch");
  NodeId max_host = -1;
  for (NodeId h : host_) max_host = std::max(max_host, h);
  children_.resize(host_.size());
  agents_of_.resize(static_cast<std::size_t>(max_host + 1));
  vertex_agents_ = true;
  for (std::size_t a = 0; a < host_.size(); ++a) {
    if (host_[a] != static_cast<NodeId>(a)) vertex_agents_ = false;
    agents_of_[static_cast<std::size_t>(host_[a])].push_back(static_cast<std::int32_t>(a));
    const auto p = parent_[a];
    if (p >= 0) {
      if (static_cast<std::size_t>(p) >= host_.size()) throw Error(ErrorKind::InvalidArgument, "forest: bad parent");
      children_[static_cast<std::size_t>(p)].push_back(static_cast<std::int32_t>(a));
    }
  }
}

AgentForest AgentForest::of_vertices(std::span<const NodeId> parent) {
  std::vector<NodeId> host(parent.size());
  for (std::size_t i = 0; i < host.size(); ++i) host[i] = static_cast<NodeId>(i);
  return AgentForest(std::move(host), std::vector<std::int32_t>(parent.begin(), parent.end()));
}

void AgentForest::validate(const WeightedGraph& g) const {
  for (std::size_t a = 0; a < host_.size(); ++a) {
    const auto p = parent_[a];
    if (p >= 0 && g.find_edge(host_[a], host_[static_cast<std::size_t>(p)]) < 0)
      throw Error(ErrorKind::InvalidArgument, "forest: parent of agent " + std::to_string(a) + " is not adjacent");
    const auto& ch = children_[a];
    for (std::size_t i = 0; i < ch.size(); ++i)
      for (std::size_t j = i + 1; j < ch.size(); ++j)
        if (host_[static_cast<std::size_t>(ch[i])] == host_[static_cast<std::size_t>(ch[j])])
          throw Error(ErrorKind::InvalidArgument, "forest: two children share a host");
  }
  if (agents_of_.size() > static_cast<std::size_t>(g.n())) throw Error(ErrorKind::InvalidArgument, "forest: bad host");
}

namespace {

std::size_t child_slot(const AgentForest& f, std::int32_t agent, NodeId from_host) {
  const auto ch = f.children(agent);
  for (std::size_t i = 0; i < ch.size(); ++i)
    if (f.host(ch[i]) == from_host) return i;
  throw Error(ErrorKind::Contract, "forest: message from a non-child");
}

std::span<const std::int32_t> hosted(const AgentForest& f, NodeId v) { return f.agents_of(v); }

// ----------------------------------------------------- keyed convergecast

struct CcAgent {
  std::map<Key, std::vector<Word>> pending;
  std::vector<char> sent, child_done;
  std::vector<Key> last;
  bool finished = false;
};

struct CcHost {
  const AgentForest* f = nullptr;
  const MergeFn* merge = nullptr;
  std::vector<CcAgent>* agents = nullptr;
  std::span<const std::int32_t> mine;

  void step(Context& c) {
    for (const auto& m : c.inbox()) {
      const auto a = f->resolve(c.id(), m.agent);
      auto& st = (*agents)[static_cast<std::size_t>(a)];
      const auto slot = child_slot(*f, a, m.from);
      if (m.words.empty()) {
        st.child_done[slot] = 1;
        continue;
      }
      const Key k = m.words[0];
      auto val = m.words.subspan(1);
      auto it = st.pending.find(k);
      if (it == st.pending.end())
        st.pending.emplace(k, std::vector<Word>(val.begin(), val.end()));
      else
        (*merge)(it->second, val);
      st.sent[slot] = 1;
      st.last[slot] = k;
    }
    for (auto a : mine) {
      auto& st = (*agents)[static_cast<std::size_t>(a)];
      if (st.finished) continue;
      const auto p = f->parent(a);
      bool all_done = true;
      for (char d : st.child_done) all_done = all_done && d;
      if (p < 0) {
        st.finished = all_done;
        continue;
      }
      if (!st.pending.empty()) {
        const Key k = st.pending.begin()->first;
        bool ok = true;
        for (std::size_t i = 0; i < st.last.size() && ok; ++i)
          ok = st.child_done[i] || (st.sent[i] && st.last[i] >= k);
        if (ok) {
          std::vector<Word> msg;
          msg.reserve(1 + st.pending.begin()->second.size());
          msg.push_back(k);
          msg.insert(msg.end(), st.pending.begin()->second.begin(), st.pending.begin()->second.end());
          c.send(f->host(p), msg, f->tag_for(p));
          st.pending.erase(st.pending.begin());
        }
        continue;
      }
      if (all_done) {
        c.send(f->host(p), std::span<const Word>{}, f->tag_for(p));
        st.finished = true;
      }
    }
  }
  bool done() const {
    for (auto a : mine)
      if (!(*agents)[static_cast<std::size_t>(a)].finished) return false;
    return true;
  }
};

}  // namespace

Run<std::vector<std::vector<KeyedItem>>> keyed_convergecast(RoundEngine& engine, const AgentForest& forest,
                                                            std::vector<std::vector<KeyedItem>> initial,
                                                            const MergeFn& merge) {
  const int n = engine.graph().n();
  if (initial.size() != forest.size()) throw Error(ErrorKind::InvalidArgument, "convergecast: one list per agent");
  std::vector<CcAgent> agents(forest.size());
  for (std::size_t a = 0; a < forest.size(); ++a) {
    auto& st = agents[a];
    const auto nch = forest.children(static_cast<std::int32_t>(a)).size();
    st.sent.assign(nch, 0);
    st.child_done.assign(nch, 0);
    st.last.assign(nch, 0);
    for (auto& it : initial[a]) {
      auto f = st.pending.find(it.key);
      if (f == st.pending.end())
        st.pending.emplace(it.key, std::move(it.value));
      else
        merge(f->second, it.value);
    }
  }
  std::vector<CcHost> hosts(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto& h = hosts[static_cast<std::size_t>(v)];
    h.f = &forest;
    h.merge = &merge;
    h.agents = &agents;
    h.mine = hosted(forest, v);
  }
  Run<std::vector<std::vector<KeyedItem>>> out;
  out.metrics = engine.run(hosts);
  out.value.resize(forest.size());
  for (std::size_t a = 0; a < forest.size(); ++a) {
    if (forest.parent(static_cast<std::int32_t>(a)) >= 0) continue;
    for (auto& [k, v] : agents[a].pending) out.value[a].push_back({k, std::move(v)});
  }
  return out;
}

// --------------------------------------------------------- forest broadcast

namespace {

struct BcHost {
  const AgentForest* f = nullptr;
  std::vector<std::deque<std::vector<Word>>>* queue = nullptr;
  std::vector<std::vector<std::vector<Word>>>* got = nullptr;
  std::span<const std::int32_t> mine;

  void step(Context& c) {
    for (const auto& m : c.inbox()) {
      const auto a = f->resolve(c.id(), m.agent);
      std::vector<Word> item(m.words.begin(), m.words.end());
      if (!f->children(a).empty()) (*queue)[static_cast<std::size_t>(a)].push_back(item);
      (*got)[static_cast<std::size_t>(a)].push_back(std::move(item));
    }
    for (auto a : mine) {
      auto& q = (*queue)[static_cast<std::size_t>(a)];
      if (q.empty()) continue;
      for (auto ch : f->children(a)) c.send(f->host(ch), q.front(), f->tag_for(ch));
      q.pop_front();
    }
  }
  bool done() const { return true; }
};

}  // namespace

Run<std::vector<std::vector<std::vector<Word>>>> forest_broadcast(RoundEngine& engine, const AgentForest& forest,
                                                                  std::vector<std::vector<std::vector<Word>>> at_roots) {
  const int n = engine.graph().n();
  if (at_roots.size() != forest.size()) throw Error(ErrorKind::InvalidArgument, "broadcast: one list per agent");
  std::vector<std::deque<std::vector<Word>>> queue(forest.size());
  std::vector<std::vector<std::vector<Word>>> got(forest.size());
  for (std::size_t a = 0; a < forest.size(); ++a) {
    if (forest.parent(static_cast<std::int32_t>(a)) >= 0) continue;
    got[a] = at_roots[a];
    if (!forest.children(static_cast<std::int32_t>(a)).empty())
      queue[a].assign(std::make_move_iterator(at_roots[a].begin()), std::make_move_iterator(at_roots[a].end()));
  }
  std::vector<BcHost> hosts(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto& h = hosts[static_cast<std::size_t>(v)];
    h.f = &forest;
    h.queue = &queue;
    h.got = &got;
    h.mine = hosted(forest, v);
  }
  Run<std::vector<std::vector<std::vector<Word>>>> out;
  out.metrics = engine.run(hosts);
  out.value = std::move(got);
  return out;
}

// ------------------------------------------------------------ up/downcast

namespace {

struct UpAgent {
  std::vector<std::pair<std::int32_t, std::vector<Word>>> vals;
  std::size_t received = 0;
  bool computed = false;
  std::vector<Word> result;
};

struct UpHost {
  const AgentForest* f = nullptr;
  const UpFn* fn = nullptr;
  std::vector<UpAgent>* agents = nullptr;
  std::span<const std::int32_t> mine;

  void step(Context& c) {
    for (const auto& m : c.inbox()) {
      const auto a = f->resolve(c.id(), m.agent);
      auto& st = (*agents)[static_cast<std::size_t>(a)];
      const auto slot = child_slot(*f, a, m.from);
      st.vals[slot].second.assign(m.words.begin(), m.words.end());
      ++st.received;
    }
    for (auto a : mine) {
      auto& st = (*agents)[static_cast<std::size_t>(a)];
      if (st.computed || st.received < st.vals.size()) continue;
      st.result = (*fn)(a, st.vals);
      st.computed = true;
      const auto p = f->parent(a);
      if (p >= 0) c.send(f->host(p), st.result, f->tag_for(p));
    }
  }
  bool done() const {
    for (auto a : mine)
      if (!(*agents)[static_cast<std::size_t>(a)].computed) return false;
    return true;
  }
};

struct DownHost {
  const AgentForest* f = nullptr;
  const DownFn* fn = nullptr;
  std::span<const std::int32_t> mine;

  void emit(Context& c, std::int32_t a, std::span<const Word> in) {
    auto outs = (*fn)(a, in);
    for (auto& [child, val] : outs) {
      if (f->parent(child) != a) throw Error(ErrorKind::Contract, "downcast: value addressed to a non-child");
      c.send(f->host(child), val, f->tag_for(child));
    }
  }
  void step(Context& c) {
    if (c.round() == 0)
      for (auto a : mine)
        if (f->parent(a) < 0) emit(c, a, {});
    for (const auto& m : c.inbox()) emit(c, f->resolve(c.id(), m.agent), m.words);
  }
  bool done() const { return true; }
};

}  // namespace

Run<std::vector<std::vector<Word>>> forest_upcast(RoundEngine& engine, const AgentForest& forest, const UpFn& fn) {
  const int n = engine.graph().n();
  std::vector<UpAgent> agents(forest.size());
  for (std::size_t a = 0; a < forest.size(); ++a)
    for (auto ch : forest.children(static_cast<std::int32_t>(a))) agents[a].vals.push_back({ch, {}});
  std::vector<UpHost> hosts(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto& h = hosts[static_cast<std::size_t>(v)];
    h.f = &forest;
    h.fn = &fn;
    h.agents = &agents;
    h.mine = hosted(forest, v);
  }
  Run<std::vector<std::vector<Word>>> out;
  out.metrics = engine.run(hosts);
  out.value.resize(forest.size());
  for (std::size_t a = 0; a < forest.size(); ++a) out.value[a] = std::move(agents[a].result);
  return out;
}

RoundMetrics forest_downcast(RoundEngine& engine, const AgentForest& forest, const DownFn& fn) {
  const int n = engine.graph().n();
  std::vector<DownHost> hosts(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto& h = hosts[static_cast<std::size_t>(v)];
    h.f = &forest;
    h.fn = &fn;
    h.mine = hosted(forest, v);
  }
  return engine.run(hosts);
}

// ------------------------------------------------- broadcast / aggregation

Run<std::vector<std::vector<BroadcastItem>>> pipeline_broadcast(RoundEngine& engine, const BfsTree& tree,
                                                                const std::vector<BroadcastItem>& items) {
  const int n = engine.graph().n();
  Run<std::vector<std::vector<BroadcastItem>>> out;
  out.value.resize(static_cast<std::size_t>(n));
  if (items.empty()) return out;
  const auto forest = AgentForest::of_vertices(tree.parent);
  std::vector<std::vector<KeyedItem>> init(static_cast<std::size_t>(n));
  std::vector<std::uint32_t> seq(static_cast<std::size_t>(n), 0);
  for (const auto& it : items) {
    const Key k = (static_cast<Key>(static_cast<std::uint32_t>(it.origin)) << 32) | seq[static_cast<std::size_t>(it.origin)]++;
    init[static_cast<std::size_t>(it.origin)].push_back({k, it.payload});
  }
  auto up = keyed_convergecast(engine, forest, std::move(init), [](std::span<Word>, std::span<const Word>) {});
  std::vector<std::vector<std::vector<Word>>> at_root(static_cast<std::size_t>(n));
  for (auto& it : up.value[static_cast<std::size_t>(tree.root)]) {
    std::vector<Word> w;
    w.reserve(it.value.size() + 1);
    w.push_back(it.key);
    w.insert(w.end(), it.value.begin(), it.value.end());
    at_root[static_cast<std::size_t>(tree.root)].push_back(std::move(w));
  }
  auto down = forest_broadcast(engine, forest, std::move(at_root));
  for (int v = 0; v < n; ++v)
    for (auto& w : down.value[static_cast<std::size_t>(v)])
      out.value[static_cast<std::size_t>(v)].push_back(
          {static_cast<NodeId>(w[0] >> 32), std::vector<Word>(w.begin() + 1, w.end())});
  out.metrics = up.metrics + down.metrics;
  return out;
}

Run<std::vector<KeyedItem>> convergecast_aggregate(RoundEngine& engine, const BfsTree& tree,
                                                   std::vector<std::vector<KeyedItem>> per_vertex,
                                                   std::size_t key_space_size, const MergeFn& merge) {
  for (const auto& list : per_vertex)
    for (const auto& it : list) {
      if (it.key >= key_space_size) throw Error(ErrorKind::InvalidArgument, "convergecast: key outside key space");
      std::vector<Word> acc = it.value;
      merge(acc, it.value);
      if (acc != it.value) throw Error(ErrorKind::Contract, "convergecast: combine must be idempotent");
    }
  const auto forest = AgentForest::of_vertices(tree.parent);
  auto r = keyed_convergecast(engine, forest, std::move(per_vertex), merge);
  return {std::move(r.value[static_cast<std::size_t>(tree.root)]), r.metrics};
}

Run<std::vector<Word>> global_reduce(RoundEngine& engine, const BfsTree& tree, std::vector<std::vector<Word>> local,
                                     const MergeFn& merge) {
  const auto forest = AgentForest::of_vertices(tree.parent);
  auto up = forest_upcast(engine, forest, [&](std::int32_t a, ChildValues ch) {
    std::vector<Word> acc = local[static_cast<std::size_t>(a)];
    for (const auto& [c, v] : ch) merge(acc, v);
    return acc;
  });
  const auto total = up.value[static_cast<std::size_t>(tree.root)];
  auto down = forest_downcast(engine, forest, [&](std::int32_t a, std::span<const Word>) {
    std::vector<std::pair<std::int32_t, std::vector<Word>>> outs;
    for (auto ch : forest.children(a)) outs.push_back({ch, total});
    return outs;
  });
  return {total, up.metrics + down};
}

namespace {

struct ExchangeNode {
  const SendStep* send = nullptr;
  const SendStep* receive = nullptr;
  void step(Context& c) {
    if (c.round() == 0)
      (*send)(c);
    else
      (*receive)(c);
  }
  bool done() const { return true; }
};

}  // namespace

RoundMetrics neighbor_exchange(RoundEngine& engine, const SendStep& send, const SendStep& receive) {
  std::vector<ExchangeNode> progs(static_cast<std::size_t>(engine.graph().n()), ExchangeNode{&send, &receive});
  return engine.run(progs);
}

// ----------------------------------------------------------- Bellman-Ford

namespace {

struct BfNode {
  double dist = std::numeric_limits<double>::infinity();
  NodeId parent = kNoNode;
  EdgeId parent_edge = -1;
  NodeId source = kNoNode;
  bool is_source = false;
  std::span<const char> mask;
  double bound = std::numeric_limits<double>::infinity();

  bool usable(EdgeId e) const { return mask.empty() || mask[static_cast<std::size_t>(e)]; }
  void announce(Context& c) const {
    for (const auto& inc : c.neighbors())
      if (usable(inc.edge)) c.send(inc.to, {word_of(dist), word_of_int(source)});
  }
  void step(Context& c) {
    if (c.round() == 0) {
      if (is_source) {
        dist = 0.0;
        source = c.id();
        announce(c);
      }
      return;
    }
    bool changed = false;
    auto nb = c.neighbors();
    for (const auto& m : c.inbox()) {
      auto it = std::lower_bound(nb.begin(), nb.end(), m.from, [](const Incident& x, NodeId t) { return x.to < t; });
      if (!usable(it->edge)) continue;
      const double nd = real_of(m.words[0]) + it->w;
      const NodeId src = static_cast<NodeId>(int_of(m.words[1]));
      if (nd > bound) continue;
      if (nd < dist || (nd == dist && src < source)) {
        dist = nd;
        source = src;
        parent = m.from;
        parent_edge = it->edge;
        changed = true;
      } else if (nd == dist && src == source && !is_source && m.from < parent) {
        parent = m.from;
        parent_edge = it->edge;
      }
    }
    if (changed) announce(c);
  }
  bool done() const { return true; }
};

}  // namespace

Run<ShortestPathForest> bellman_ford(RoundEngine& engine, std::span<const NodeId> sources, std::span<const char> edge_mask,
                                     double bound) {
  const int n = engine.graph().n();
  if (!edge_mask.empty() && edge_mask.size() != engine.graph().m())
    throw Error(ErrorKind::InvalidArgument, "bellman_ford: mask size mismatch");
  std::vector<BfNode> progs(static_cast<std::size_t>(n));
  for (auto& p : progs) {
    p.mask = edge_mask;
    p.bound = bound;
  }
  for (NodeId s : sources) progs[static_cast<std::size_t>(s)].is_source = true;
  Run<ShortestPathForest> out;
  out.metrics = engine.run(progs);
  auto& r = out.value;
  r.dist.resize(static_cast<std::size_t>(n));
  r.parent.resize(static_cast<std::size_t>(n));
  r.parent_edge.resize(static_cast<std::size_t>(n));
  r.source.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const auto& p = progs[static_cast<std::size_t>(v)];
    r.dist[static_cast<std::size_t>(v)] = p.dist;
    r.parent[static_cast<std::size_t>(v)] = p.parent;
    r.parent_edge[static_cast<std::size_t>(v)] = p.parent_edge;
    r.source[static_cast<std::size_t>(v)] = p.source;
  }
  return out;
}

}  // namespace congest_light
