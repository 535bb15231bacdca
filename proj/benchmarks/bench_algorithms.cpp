#include <benchmark/benchmark.h>

#include <cmath>

#include "congest_light/doubling.hpp"
#include "congest_light/euler_tour.hpp"
#include "congest_light/light_spanner.hpp"
#include "congest_light/nets.hpp"
#include "congest_light/slt.hpp"

using namespace congest_light;

namespace {

WeightedGraph random_instance(int n, std::uint64_t seed) {
  GenParams gp;
  gp.n = n;
  gp.p = std::min(1.0, 3.0 * std::log(n) / n);
  return generate(GenKind::RandomWeighted, gp, seed).graph;
}

void record(benchmark::State& state, const RoundMetrics& m) {
  state.counters["rounds"] = static_cast<double>(m.rounds_used);
  state.counters["messages"] = static_cast<double>(m.total_messages);
}

void BM_EngineFlood(benchmark::State& state) {
  const auto g = random_instance(static_cast<int>(state.range(0)), 1);
  RoundMetrics m;
  for (auto _ : state) {
    RoundEngine eng(g);
    m = build_bfs_tree(eng, 0).metrics;
  }
  record(state, m);
}
BENCHMARK(BM_EngineFlood)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_EulerTour(benchmark::State& state) {
  const auto g = random_instance(static_cast<int>(state.range(0)), 2);
  RoundMetrics m;
  for (auto _ : state) {
    RoundEngine eng(g);
    m = compute_euler_tour(eng, 0).metrics;
  }
  record(state, m);
}
BENCHMARK(BM_EulerTour)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ShallowLightTree(benchmark::State& state) {
  const auto g = random_instance(static_cast<int>(state.range(0)), 3);
  RoundMetrics m;
  for (auto _ : state) {
    RoundEngine eng(g);
    m = build_slt(eng, 0, 0.5).metrics;
  }
  record(state, m);
}
BENCHMARK(BM_ShallowLightTree)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_LightSpanner(benchmark::State& state) {
  const auto g = random_instance(static_cast<int>(state.range(0)), 4);
  const int k = static_cast<int>(state.range(1));
  RoundMetrics m;
  for (auto _ : state) {
    RoundEngine eng(g);
    m = build_light_spanner(eng, k, 0.5).metrics;
  }
  record(state, m);
}
BENCHMARK(BM_LightSpanner)->Args({256, 2})->Args({1024, 2})->Args({4096, 2})->Args({1024, 3})->Unit(benchmark::kMillisecond);

void BM_Net(benchmark::State& state) {
  const auto g = random_instance(static_cast<int>(state.range(0)), 5);
  RoundMetrics m;
  for (auto _ : state) {
    RoundEngine eng(g);
    m = construct_net(eng, 4.0, 0.1).metrics;
  }
  record(state, m);
}
BENCHMARK(BM_Net)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_DoublingSpanner(benchmark::State& state) {
  GenParams gp;
  gp.n = static_cast<int>(state.range(0));
  gp.radius = std::sqrt(3.0 * std::log(gp.n) / (M_PI * gp.n));
  const auto g = generate(GenKind::UnitSquarePoints, gp, 6).graph;
  RoundMetrics m;
  for (auto _ : state) {
    RoundEngine eng(g);
    m = build_doubling_spanner(eng, 0.5).metrics;
  }
  record(state, m);
}
BENCHMARK(BM_DoublingSpanner)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
