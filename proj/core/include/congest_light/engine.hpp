#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "congest_light/graph.hpp"

namespace congest_light {

/// One message word. Ids and counters are stored as integers, weights as the bit pattern of a double.
using Word = std::uint64_t;

inline Word word_of(double d) { return std::bit_cast<Word>(d); }
inline double real_of(Word w) { return std::bit_cast<double>(w); }
inline Word word_of_int(std::int64_t x) { return static_cast<Word>(x); }
inline std::int64_t int_of(Word w) { return static_cast<std::int64_t>(w); }

/// Sub-agent tag; messages without a tag address the vertex itself.
using AgentTag = std::int32_t;
inline constexpr AgentTag kNoAgent = -1;

struct RoundMetrics {
  std::int64_t rounds_used = 0;
  std::int64_t max_words_per_edge_round = 0;
  std::int64_t total_messages = 0;
  std::int64_t budget_violations = 0;  // (edge, round) pairs over budget, audit-only mode

  /// Sequential composition: rounds add, peaks take the max.
  RoundMetrics& operator+=(const RoundMetrics& o);
};

RoundMetrics operator+(RoundMetrics a, const RoundMetrics& b);

struct CongestionViolation {
  std::int64_t round;
  NodeId from;
  NodeId to;
  std::int64_t words;
};

struct TraceEntry {
  std::int64_t round;
  NodeId from;
  NodeId to;
  AgentTag agent;
  std::vector<Word> words;
};

struct EngineConfig {
  int word_budget = 8;               // words per directed edge per round
  bool strict = false;               // false: record violations instead of failing
  std::int64_t round_cap = 4'000'000;  // per run
  std::uint64_t seed = 1;
  bool record_trace = false;
};

struct Incoming {
  NodeId from;
  AgentTag agent;
  std::span<const Word> words;
};

/** Everything a node may observe during one step: its id, incident edges, and inbox. */
class Context {
 public:
  NodeId id() const { return id_; }
  std::int64_t round() const { return round_; }
  std::span<const Incident> neighbors() const { return nbrs_; }
  std::span<const Incoming> inbox() const { return inbox_; }
  /// Shared run seed; programs that need common randomness derive it from here.
  std::uint64_t seed() const { return seed_; }

  void send(NodeId to, std::span<const Word> words, AgentTag agent = kNoAgent);
  void send(NodeId to, std::initializer_list<Word> words, AgentTag agent = kNoAgent) {
    send(to, std::span<const Word>(words.begin(), words.size()), agent);
  }

  class Sink {
   public:
    virtual ~Sink() = default;
    virtual void push(NodeId from, NodeId to, AgentTag agent, std::span<const Word> words) = 0;
  };

 private:
  friend class RoundEngine;
  NodeId id_ = 0;
  std::int64_t round_ = 0;
  std::uint64_t seed_ = 0;
  std::span<const Incident> nbrs_;
  std::span<const Incoming> inbox_;
  Sink* sink_ = nullptr;
};

/** Per-vertex algorithm interface. `done()` lets a node report local termination. */
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void step(Context& ctx) = 0;
  virtual bool done() const { return true; }
};

/**
 * Synchronous executor. Each round every node steps once (id order) on the messages delivered
 * at the end of the previous round; a round counts when messages are in flight or some node
 * is still not done. Runs stop on quiescence, or when `stop` returns true after a round.
 */
class RoundEngine {
 public:
  explicit RoundEngine(const WeightedGraph& g, EngineConfig cfg = {});

  const WeightedGraph& graph() const { return *g_; }
  const EngineConfig& config() const { return cfg_; }
  std::int64_t round_counter() const { return round_counter_; }
  const std::vector<CongestionViolation>& violations() const { return violations_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  /// Order-sensitive hash of every message sent by this engine so far.
  std::uint64_t trace_digest() const { return digest_; }

  RoundMetrics run_programs(std::vector<std::unique_ptr<NodeProgram>>& programs,
                            const std::function<bool()>& stop = {});

  template <class P>
  RoundMetrics run(std::vector<P>& programs, const std::function<bool()>& stop = {}) {
    return run_impl([&](NodeId v, Context& c) { programs[static_cast<std::size_t>(v)].step(c); },
                    [&] {
                      for (const auto& p : programs)
                        if (!p.done()) return false;
                      return true;
                    },
                    stop);
  }

 private:
  RoundMetrics run_impl(const std::function<void(NodeId, Context&)>& step, const std::function<bool()>& all_done,
                        const std::function<bool()>& stop);

  const WeightedGraph* g_;
  EngineConfig cfg_;
  std::int64_t round_counter_ = 0;
  std::vector<CongestionViolation> violations_;
  std::vector<TraceEntry> trace_;
  std::uint64_t digest_ = 1469598103934665603ULL;
};

/// Mixes (seed, value) into a well-spread 64-bit hash (splitmix64 finalizer).
std::uint64_t mix_hash(std::uint64_t seed, std::uint64_t value);

}  // namespace congest_light
