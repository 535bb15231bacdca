#include "congest_light/engine.hpp"

#include <algorithm>

namespace congest_light {

RoundMetrics& RoundMetrics::operator+=(const RoundMetrics& o) {
  rounds_used += o.rounds_used;
  max_words_per_edge_round = std::max(max_words_per_edge_round, o.max_words_per_edge_round);
  total_messages += o.total_messages;
  budget_violations += o.budget_violations;
  return *this;
}

RoundMetrics operator+(RoundMetrics a, const RoundMetrics& b) { return a += b; }

std::uint64_t mix_hash(std::uint64_t seed, std::uint64_t value) {
  std::uint64_t z = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void Context::send(NodeId to, std::span<const Word> words, AgentTag agent) { sink_->push(id_, to, agent, words); }

namespace {

struct Pending {
  NodeId from;
  NodeId to;
  AgentTag agent;
  std::size_t offset;
  std::size_t len;
};

class Outbox final : public Context::Sink {
 public:
  explicit Outbox(const WeightedGraph& g) : g_(g) {}
  void push(NodeId from, NodeId to, AgentTag agent, std::span<const Word> words) override {
    if (g_.find_edge(from, to) < 0)
      throw Error(ErrorKind::Locality, "locality violation: node " + std::to_string(from) + " sent to non-neighbor " +
                                           std::to_string(to));
    msgs.push_back({from, to, agent, arena.size(), words.size()});
    arena.insert(arena.end(), words.begin(), words.end());
  }
  void clear() {
    msgs.clear();
    arena.clear();
  }
  std::vector<Pending> msgs;
  std::vector<Word> arena;

 private:
  const WeightedGraph& g_;
};

}  // namespace

RoundEngine::RoundEngine(const WeightedGraph& g, EngineConfig cfg) : g_(&g), cfg_(cfg) {
  if (cfg_.word_budget < 1) throw Error(ErrorKind::InvalidArgument, "word budget must be >= 1");
}

RoundMetrics RoundEngine::run_programs(std::vector<std::unique_ptr<NodeProgram>>& programs,
                                       const std::function<bool()>& stop) {
  if (static_cast<int>(programs.size()) != g_->n())
    throw Error(ErrorKind::InvalidArgument, "need exactly one program per vertex");
  return run_impl([&](NodeId v, Context& c) { programs[static_cast<std::size_t>(v)]->step(c); },
                  [&] {
                    for (const auto& p : programs)
                      if (!p->done()) return false;
                    return true;
                  },
                  stop);
}

RoundMetrics RoundEngine::run_impl(const std::function<void(NodeId, Context&)>& step,
                                   const std::function<bool()>& all_done, const std::function<bool()>& stop) {
  const int n = g_->n();
  RoundMetrics m;
  Outbox out(*g_);
  // Delivered messages of the previous round (storage + per-node index).
  std::vector<Word> in_arena;
  std::vector<Incoming> in_msgs;
  std::vector<std::size_t> in_off(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Pending> sorted;
  std::int64_t local_round = 0;
  Context ctx;
  ctx.sink_ = &out;
  ctx.seed_ = cfg_.seed;

  for (;;) {
    out.clear();
    for (NodeId v = 0; v < n; ++v) {
      ctx.id_ = v;
      ctx.round_ = local_round;
      ctx.nbrs_ = g_->adj(v);
      ctx.inbox_ = std::span<const Incoming>(in_msgs.data() + in_off[static_cast<std::size_t>(v)],
                                             in_msgs.data() + in_off[static_cast<std::size_t>(v) + 1]);
      step(v, ctx);
    }
    const bool quiet = out.msgs.empty() && all_done();
    if (quiet || (stop && stop())) break;

    ++local_round;
    ++round_counter_;
    if (local_round > cfg_.round_cap)
      throw Error(ErrorKind::Nontermination,
                  "nontermination: round cap " + std::to_string(cfg_.round_cap) + " exceeded");

    // Deliver: order by (receiver, sender, send order). Senders step in id order, so a stable
    // bucket pass on the receiver suffices.
    std::fill(in_off.begin(), in_off.end(), 0);
    for (const auto& p : out.msgs) ++in_off[static_cast<std::size_t>(p.to) + 1];
    for (std::size_t k = 1; k < in_off.size(); ++k) in_off[k] += in_off[k - 1];
    sorted.resize(out.msgs.size());
    {
      std::vector<std::size_t> cursor(in_off.begin(), in_off.end() - 1);
      for (const auto& p : out.msgs) sorted[cursor[static_cast<std::size_t>(p.to)]++] = p;
    }
    out.msgs.swap(sorted);
    std::size_t i = 0;
    while (i < out.msgs.size()) {
      std::size_t j = i;
      std::int64_t words = 0;
      while (j < out.msgs.size() && out.msgs[j].to == out.msgs[i].to && out.msgs[j].from == out.msgs[i].from) {
        const auto& p = out.msgs[j];
        words += std::max<std::int64_t>(1, static_cast<std::int64_t>(p.len) + (p.agent != kNoAgent ? 1 : 0));
        ++j;
      }
      m.max_words_per_edge_round = std::max(m.max_words_per_edge_round, words);
      if (words > cfg_.word_budget) {
        const CongestionViolation cv{local_round, out.msgs[i].from, out.msgs[i].to, words};
        if (cfg_.strict)
          throw Error(ErrorKind::Congestion, "congestion violation on edge " + std::to_string(cv.from) + "->" +
                                                 std::to_string(cv.to) + " in round " + std::to_string(cv.round) +
                                                 ": " + std::to_string(words) + " words > budget " +
                                                 std::to_string(cfg_.word_budget));
        ++m.budget_violations;
        if (violations_.size() < 10000) violations_.push_back(cv);
      }
      i = j;
    }
    m.total_messages += static_cast<std::int64_t>(out.msgs.size());

    in_arena.swap(out.arena);
    in_msgs.clear();
    for (const auto& p : out.msgs) {
      in_msgs.push_back({p.from, p.agent, std::span<const Word>(in_arena.data() + p.offset, p.len)});
      digest_ = mix_hash(digest_, (static_cast<std::uint64_t>(p.from) << 32) ^ static_cast<std::uint32_t>(p.to));
      digest_ = mix_hash(digest_, static_cast<std::uint64_t>(p.agent));
      for (std::size_t k = 0; k < p.len; ++k) digest_ = mix_hash(digest_, in_arena[p.offset + k]);
      if (cfg_.record_trace)
        trace_.push_back({local_round, p.from, p.to, p.agent,
                          std::vector<Word>(in_arena.begin() + static_cast<std::ptrdiff_t>(p.offset),
                                            in_arena.begin() + static_cast<std::ptrdiff_t>(p.offset + p.len))});
    }
  }
  m.rounds_used = local_round;
  return m;
}

}  // namespace congest_light
