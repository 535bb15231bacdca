#include "congest_light/mst_fragments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"

namespace congest_light {

std::vector<EdgeId> FragmentDecomposition::tree_edges() const {
  std::vector<EdgeId> all = internal_edges;
  all.insert(all.end(), external_edges.begin(), external_edges.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<std::vector<NodeId>> FragmentDecomposition::children() const {
  std::vector<std::vector<NodeId>> ch(parent.size());
  for (std::size_t v = 0; v < parent.size(); ++v)
    if (parent[v] != kNoNode) ch[static_cast<std::size_t>(parent[v])].push_back(static_cast<NodeId>(v));
  return ch;
}

std::vector<NodeId> FragmentDecomposition::fragment_parent() const {
  std::vector<NodeId> p = parent;
  for (NodeId r : fragment_root) p[static_cast<std::size_t>(r)] = kNoNode;
  return p;
}

namespace {

struct Cand {
  double w;
  NodeId lo, hi;
  EdgeId id;
  NodeId flo, fhi;  // fragment labels of the endpoints
};

bool cand_less(const Cand& a, const Cand& b) {
  if (a.w != b.w) return a.w < b.w;
  if (a.lo != b.lo) return a.lo < b.lo;
  return a.hi < b.hi;
}

struct CandOrder {
  bool operator()(const Cand& a, const Cand& b) const { return cand_less(a, b); }
};

std::vector<Word> encode(const Cand& c) {
  return {word_of(c.w), word_of_int(c.lo), word_of_int(c.hi), word_of_int(c.id), word_of_int(c.flo),
          word_of_int(c.fhi)};
}

Cand decode(std::span<const Word> w) {
  return {real_of(w[0]),
          static_cast<NodeId>(int_of(w[1])),
          static_cast<NodeId>(int_of(w[2])),
          static_cast<EdgeId>(int_of(w[3])),
          static_cast<NodeId>(int_of(w[4])),
          static_cast<NodeId>(int_of(w[5]))};
}

struct LabelDsu {
  std::map<NodeId, NodeId> p;
  NodeId find(NodeId x) {
    auto it = p.find(x);
    if (it == p.end()) return x;
    const NodeId r = find(it->second);
    it->second = r;
    return r;
  }
  bool unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

/// Pipelined upcast of inter-fragment edges with cycle filtering (sends in increasing key order).
struct UpcastNode {
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  std::set<Cand, CandOrder> pending;
  std::vector<char> sent, child_done;
  std::vector<Cand> last;
  LabelDsu forwarded;
  bool finished = false;

  std::size_t slot(NodeId from) const {
    return static_cast<std::size_t>(std::lower_bound(children.begin(), children.end(), from) - children.begin());
  }
  void step(Context& c) {
    for (const auto& m : c.inbox()) {
      const auto i = slot(m.from);
      if (m.words.empty()) {
        child_done[i] = 1;
        continue;
      }
      const Cand cd = decode(m.words);
      pending.insert(cd);
      sent[i] = 1;
      last[i] = cd;
    }
    if (finished) return;
    bool all_done = true;
    for (char d : child_done) all_done = all_done && d;
    if (parent == kNoNode) {
      finished = all_done;
      return;
    }
    while (!pending.empty()) {
      const Cand cd = *pending.begin();
      if (forwarded.find(cd.flo) == forwarded.find(cd.fhi)) {
        pending.erase(pending.begin());
        continue;
      }
      bool ok = true;
      for (std::size_t i = 0; i < children.size() && ok; ++i)
        ok = child_done[i] || (sent[i] && !cand_less(last[i], cd));
      if (ok) {
        c.send(parent, encode(cd));
        forwarded.unite(cd.flo, cd.fhi);
        pending.erase(pending.begin());
      }
      return;
    }
    if (all_done) {
      c.send(parent, std::span<const Word>{});
      finished = true;
    }
  }
  bool done() const { return finished; }
};

/// Pointer reversal along the path from a new root up to the old root.
struct FlipNode {
  const WeightedGraph* graph = nullptr;
  NodeId* tparent = nullptr;
  EdgeId* tparent_edge = nullptr;
  NodeId start_target = kNoNode;  // when set, this vertex becomes child of start_target
  EdgeId start_edge = -1;
  bool make_root = false;         // when set, this vertex becomes the root of its tree

  void forward(Context& c, NodeId old) {
    if (old != kNoNode) c.send(old, {word_of_int(1)});
  }
  void step(Context& c) {
    if (c.round() == 0) {
      if (start_target != kNoNode || make_root) {
        const NodeId old = *tparent;
        *tparent = start_target;
        *tparent_edge = start_edge;
        forward(c, old);
      }
      return;
    }
    for (const auto& m : c.inbox()) {
      const NodeId old = *tparent;
      *tparent = m.from;
      *tparent_edge = graph->find_edge(c.id(), m.from);
      forward(c, old);
    }
  }
  bool done() const { return true; }
};

class Builder {
 public:
  Builder(RoundEngine& eng, NodeId root, std::span<const char> mask, const FragmentOptions& opts)
      : eng_(eng), g_(eng.graph()), root_(root), mask_(mask) {
    const int n = g_.n();
    s_ = opts.size_target > 0 ? opts.size_target
                              : std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
    frag_.resize(static_cast<std::size_t>(n));
    std::iota(frag_.begin(), frag_.end(), 0);
    tparent_.assign(static_cast<std::size_t>(n), kNoNode);
    tparent_edge_.assign(static_cast<std::size_t>(n), -1);
    tnbrs_.resize(static_cast<std::size_t>(n));
  }

  Run<FragmentDecomposition> build() {
    grow();
    cut();
    finish();
    return {std::move(out_), metrics_};
  }

 private:
  bool usable(EdgeId e) const { return mask_.empty() || mask_[static_cast<std::size_t>(e)]; }
  std::size_t at(NodeId v) const { return static_cast<std::size_t>(v); }

  void add_tree_nbr(NodeId v, NodeId x, EdgeId e) {
    auto& l = tnbrs_[at(v)];
    for (const auto& [y, f] : l)
      if (f == e) return;
    l.push_back({x, e});
  }
  void drop_tree_nbr(NodeId v, EdgeId e) {
    auto& l = tnbrs_[at(v)];
    l.erase(std::remove_if(l.begin(), l.end(), [&](const auto& p) { return p.second == e; }), l.end());
  }

  /// Every vertex tells its tree neighbors who its parent is (children learn nothing new here
  /// beyond what the forest encodes, but the round is paid).
  void refresh_children() {
    metrics_ += neighbor_exchange(
        eng_,
        [&](Context& c) {
          for (const auto& [x, e] : tnbrs_[at(c.id())]) c.send(x, {word_of_int(tparent_[at(c.id())])});
        },
        [](Context&) {});
  }

  void relabel(const std::function<Word(NodeId)>& label_of_root) {
    const auto forest = AgentForest::of_vertices(tparent_);
    metrics_ += forest_downcast(eng_, forest, [&](std::int32_t a, std::span<const Word> in) {
      const Word label = in.empty() ? label_of_root(a) : in[0];
      frag_[at(a)] = static_cast<NodeId>(int_of(label));
      std::vector<std::pair<std::int32_t, std::vector<Word>>> outs;
      for (auto ch : forest.children(a)) outs.push_back({ch, {label}});
      return outs;
    });
  }

  /// Neighbor fragment labels over usable edges.
  std::vector<std::vector<std::pair<NodeId, NodeId>>> exchange_labels() {
    std::vector<std::vector<std::pair<NodeId, NodeId>>> seen(static_cast<std::size_t>(g_.n()));
    metrics_ += neighbor_exchange(
        eng_,
        [&](Context& c) {
          for (const auto& inc : c.neighbors())
            if (usable(inc.edge)) c.send(inc.to, {word_of_int(frag_[at(c.id())])});
        },
        [&](Context& c) {
          for (const auto& m : c.inbox())
            seen[at(c.id())].push_back({m.from, static_cast<NodeId>(int_of(m.words[0]))});
        });
    return seen;
  }

  void run_flips(const std::vector<NodeId>& target, const std::vector<EdgeId>& edge, const std::vector<char>& make_root) {
    std::vector<FlipNode> progs(static_cast<std::size_t>(g_.n()));
    for (int v = 0; v < g_.n(); ++v) {
      auto& p = progs[at(v)];
      p.graph = &g_;
      p.tparent = &tparent_[at(v)];
      p.tparent_edge = &tparent_edge_[at(v)];
      p.start_target = target[at(v)];
      p.start_edge = edge[at(v)];
      p.make_root = make_root[at(v)] && tparent_[at(v)] != kNoNode;
    }
    metrics_ += eng_.run(progs);
  }

  // Boruvka phases over fragments smaller than the target size.
  void grow() {
    const int n = g_.n();
    if (n == 1) return;
    const int phases = static_cast<int>(std::ceil(std::log2(static_cast<double>(s_)))) + 1;
    for (int ph = 0; ph < phases; ++ph) {
      const auto seen = exchange_labels();
      std::vector<Cand> best(static_cast<std::size_t>(n), Cand{0, 0, 0, -1, 0, 0});
      for (int v = 0; v < n; ++v)
        for (const auto& [x, fx] : seen[at(v)]) {
          if (fx == frag_[at(v)]) continue;
          const EdgeId e = g_.find_edge(v, x);
          const Cand c{g_.edge(e).w, std::min(v, x), std::max(v, x), e, 0, 0};
          if (best[at(v)].id < 0 || cand_less(c, best[at(v)])) best[at(v)] = c;
        }
      const auto forest = AgentForest::of_vertices(tparent_);
      // Up: (minimum outgoing edge, fragment size).
      auto up = forest_upcast(eng_, forest, [&](std::int32_t a, ChildValues ch) {
        Cand b = best[at(a)];
        std::int64_t size = 1;
        for (const auto& [c, w] : ch) {
          const Cand cc{real_of(w[0]), static_cast<NodeId>(int_of(w[1])), static_cast<NodeId>(int_of(w[2])),
                        static_cast<EdgeId>(int_of(w[3])), 0, 0};
          if (cc.id >= 0 && (b.id < 0 || cand_less(cc, b))) b = cc;
          size += int_of(w[4]);
        }
        return std::vector<Word>{word_of(b.w), word_of_int(b.lo), word_of_int(b.hi), word_of_int(b.id),
                                 word_of_int(size)};
      });
      metrics_ += up.metrics;
      // Down: the root's decision (moe edge or -1 when passive).
      std::vector<EdgeId> moe(static_cast<std::size_t>(n), -1);
      metrics_ += forest_downcast(eng_, forest, [&](std::int32_t a, std::span<const Word> in) {
        Word decision;
        if (in.empty()) {
          const auto& r = up.value[at(a)];
          const bool active = int_of(r[4]) < s_ && int_of(r[3]) >= 0;
          decision = word_of_int(active ? int_of(r[3]) : -1);
        } else {
          decision = in[0];
        }
        moe[at(a)] = static_cast<EdgeId>(int_of(decision));
        std::vector<std::pair<std::int32_t, std::vector<Word>>> outs;
        for (auto ch : forest.children(a)) outs.push_back({ch, {decision}});
        return outs;
      });
      // Merge requests across chosen edges.
      std::vector<std::vector<std::pair<NodeId, NodeId>>> requests(static_cast<std::size_t>(n));
      metrics_ += neighbor_exchange(
          eng_,
          [&](Context& c) {
            const NodeId v = c.id();
            const EdgeId e = moe[at(v)];
            if (e < 0) return;
            const auto& ed = g_.edge(e);
            if (ed.u != v && ed.v != v) return;
            c.send(ed.u == v ? ed.v : ed.u, {word_of_int(frag_[at(v)])});
          },
          [&](Context& c) {
            for (const auto& m : c.inbox())
              requests[at(c.id())].push_back({m.from, static_cast<NodeId>(int_of(m.words[0]))});
          });
      std::vector<NodeId> target(static_cast<std::size_t>(n), kNoNode);
      std::vector<EdgeId> target_edge(static_cast<std::size_t>(n), -1);
      for (int v = 0; v < n; ++v) {
        for (const auto& [x, fx] : requests[at(v)]) add_tree_nbr(v, x, g_.find_edge(v, x));
        const EdgeId e = moe[at(v)];
        if (e < 0) continue;
        const auto& ed = g_.edge(e);
        if (ed.u != v && ed.v != v) continue;
        const NodeId y = ed.u == v ? ed.v : ed.u;
        add_tree_nbr(v, y, e);
        NodeId mutual_label = kNoNode;
        for (const auto& [x, fx] : requests[at(v)])
          if (x == y) mutual_label = fx;
        const bool hooks = mutual_label == kNoNode || frag_[at(v)] > mutual_label;
        if (hooks) {
          target[at(v)] = y;
          target_edge[at(v)] = e;
        }
      }
      run_flips(target, target_edge, std::vector<char>(static_cast<std::size_t>(n), 0));
      refresh_children();
      relabel([](NodeId r) { return word_of_int(r); });
    }
  }

  // Split fragments into pieces of height at most the target size.
  void cut() {
    const int n = g_.n();
    if (n == 1) return;
    const auto forest = AgentForest::of_vertices(tparent_);
    std::vector<char> cut_here(static_cast<std::size_t>(n), 0);
    auto up = forest_upcast(eng_, forest, [&](std::int32_t a, ChildValues ch) {
      std::int64_t h = 0;
      for (const auto& [c, w] : ch)
        if (!int_of(w[1])) h = std::max<std::int64_t>(h, int_of(w[0]) + 1);
      const bool cut = tparent_[at(a)] != kNoNode && h >= s_;
      cut_here[at(a)] = cut;
      return std::vector<Word>{word_of_int(h), word_of_int(cut ? 1 : 0)};
    });
    metrics_ += up.metrics;
    for (int v = 0; v < n; ++v) {
      if (!cut_here[at(v)]) continue;
      const NodeId p = tparent_[at(v)];
      const EdgeId e = tparent_edge_[at(v)];
      drop_tree_nbr(v, e);
      drop_tree_nbr(p, e);  // the parent saw the cut flag in the upcast
      tparent_[at(v)] = kNoNode;
      tparent_edge_[at(v)] = -1;
    }
    relabel([](NodeId r) { return word_of_int(r); });
  }

  // Inter-fragment MST edges via a BFS tree, then fragment tree broadcast and re-rooting.
  void finish() {
    const int n = g_.n();
    auto bfs = build_bfs_tree(eng_, root_);
    metrics_ += bfs.metrics;
    const auto seen = exchange_labels();
    std::vector<UpcastNode> progs(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      auto& p = progs[at(v)];
      p.parent = bfs.value.parent[at(v)];
      p.children = bfs.value.children[at(v)];
      p.sent.assign(p.children.size(), 0);
      p.child_done.assign(p.children.size(), 0);
      p.last.assign(p.children.size(), Cand{});
      for (const auto& [x, fx] : seen[at(v)])
        if (fx != frag_[at(v)] && v < x) {
          const EdgeId e = g_.find_edge(v, x);
          p.pending.insert(Cand{g_.edge(e).w, v, x, e, frag_[at(v)], fx});
        }
    }
    metrics_ += eng_.run(progs);

    // Root completes the MST over fragment labels.
    std::vector<Cand> chosen;
    {
      LabelDsu d;
      for (const auto& c : progs[at(root_)].pending)
        if (d.unite(c.flo, c.fhi)) chosen.push_back(c);
    }
    std::vector<BroadcastItem> items;
    items.push_back({root_, {word_of_int(0), word_of_int(frag_[at(root_)])}});
    for (const auto& c : chosen) {
      auto w = encode(c);
      w.insert(w.begin(), word_of_int(1));
      items.push_back({root_, std::move(w)});
    }
    auto bc = pipeline_broadcast(eng_, bfs.value, items);
    metrics_ += bc.metrics;

    // Every vertex now holds the same item list; the fragment tree is derived locally from it.
    const auto& known = bc.value[at(root_)];
    NodeId root_label = kNoNode;
    std::vector<Cand> ext;
    for (const auto& it : known) {
      if (int_of(it.payload[0]) == 0)
        root_label = static_cast<NodeId>(int_of(it.payload[1]));
      else
        ext.push_back(decode(std::span<const Word>(it.payload).subspan(1)));
    }
    std::map<NodeId, std::vector<std::size_t>> fadj;
    for (std::size_t i = 0; i < ext.size(); ++i) {
      fadj[ext[i].flo].push_back(i);
      fadj[ext[i].fhi].push_back(i);
    }
    std::map<NodeId, std::pair<NodeId, std::size_t>> fparent;  // label -> (parent label, ext index)
    std::map<NodeId, NodeId> new_root;                          // label -> root vertex
    new_root[root_label] = root_;
    std::vector<NodeId> order{root_label};
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      const NodeId f = order[qi];
      for (auto i : fadj[f]) {
        const NodeId other = ext[i].flo == f ? ext[i].fhi : ext[i].flo;
        if (other == root_label || fparent.count(other)) continue;
        fparent[other] = {f, i};
        new_root[other] = ext[i].flo == other ? ext[i].lo : ext[i].hi;
        order.push_back(other);
      }
    }
    if (order.size() != std::set<NodeId>(frag_.begin(), frag_.end()).size())
      throw Error(ErrorKind::Disconnected, "compute_fragments: tree candidates do not span the graph");

    // Dense indices: root fragment first, others by their root vertex id.
    std::vector<std::pair<NodeId, NodeId>> roots_sorted;  // (root vertex, label)
    for (const auto& [label, r] : new_root)
      if (label != root_label) roots_sorted.push_back({r, label});
    std::sort(roots_sorted.begin(), roots_sorted.end());
    std::map<NodeId, std::int32_t> index;
    index[root_label] = 0;
    for (std::size_t i = 0; i < roots_sorted.size(); ++i)
      index[roots_sorted[i].second] = static_cast<std::int32_t>(i + 1);

    std::vector<char> make_root(static_cast<std::size_t>(n), 0);
    for (const auto& [label, r] : new_root) make_root[at(r)] = 1;
    run_flips(std::vector<NodeId>(static_cast<std::size_t>(n), kNoNode), std::vector<EdgeId>(static_cast<std::size_t>(n), -1),
              make_root);
    refresh_children();
    relabel([&](NodeId r) { return word_of_int(index.at(frag_[at(r)])); });

    const std::size_t k = index.size();
    auto& o = out_;
    o.root = root_;
    o.fragment_of.assign(frag_.begin(), frag_.end());
    o.fragment_root.assign(k, kNoNode);
    o.parent_fragment.assign(k, -1);
    o.fragment_parent_edge.assign(k, -1);
    for (const auto& [label, r] : new_root) o.fragment_root[static_cast<std::size_t>(index.at(label))] = r;
    o.parent = tparent_;
    o.parent_edge = tparent_edge_;
    for (const auto& [label, pe] : fparent) {
      const auto fi = static_cast<std::size_t>(index.at(label));
      const Cand& c = ext[pe.second];
      o.parent_fragment[fi] = index.at(pe.first);
      o.fragment_parent_edge[fi] = c.id;
      const NodeId r = o.fragment_root[fi];
      o.parent[at(r)] = c.lo == r ? c.hi : c.lo;
      o.parent_edge[at(r)] = c.id;
      o.external_edges.push_back(c.id);
    }
    for (int v = 0; v < n; ++v)
      if (tparent_[at(v)] != kNoNode) o.internal_edges.push_back(tparent_edge_[at(v)]);
    std::sort(o.internal_edges.begin(), o.internal_edges.end());
    std::sort(o.external_edges.begin(), o.external_edges.end());
  }

  RoundEngine& eng_;
  const WeightedGraph& g_;
  NodeId root_;
  std::span<const char> mask_;
  int s_ = 1;
  std::vector<NodeId> frag_;
  std::vector<NodeId> tparent_;
  std::vector<EdgeId> tparent_edge_;
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> tnbrs_;
  RoundMetrics metrics_;
  FragmentDecomposition out_;
};

}  // namespace

Run<FragmentDecomposition> compute_fragments(RoundEngine& engine, NodeId root, std::span<const char> tree_mask,
                                             const FragmentOptions& opts) {
  if (root < 0 || root >= engine.graph().n()) throw Error(ErrorKind::InvalidArgument, "root out of range");
  if (!tree_mask.empty() && tree_mask.size() != engine.graph().m())
    throw Error(ErrorKind::InvalidArgument, "tree mask size mismatch");
  return Builder(engine, root, tree_mask, opts).build();
}

std::string fragments_to_json(const FragmentDecomposition& f) {
  nlohmann::json j;
  j["root"] = f.root;
  j["fragment_of"] = f.fragment_of;
  j["fragment_root"] = f.fragment_root;
  j["parent_fragment"] = f.parent_fragment;
  j["fragment_parent_edge"] = f.fragment_parent_edge;
  j["internal_edges"] = f.internal_edges;
  j["external_edges"] = f.external_edges;
  return j.dump();
}

}  // namespace congest_light
