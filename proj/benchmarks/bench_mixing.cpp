// Throughput of the averaging rounds and the state queries they lean on,
// at the scale of the 180-node estimation experiments.

#include <benchmark/benchmark.h>

#include "maxdissent/experiment.hpp"
#include "maxdissent/graph.hpp"
#include "maxdissent/mixing.hpp"
#include "maxdissent/state.hpp"

using namespace maxdissent;

namespace {

struct Fixture {
  Graph g;
  StateMatrix x0;
  Fixture(GraphKind kind, int n, std::optional<double> p = std::nullopt)
      : g(make_graph(kind, n, p, 7)), x0(initial_state(n, 1, 11)) {}
};

Fixture& er180() {
  static Fixture f(GraphKind::erdos_renyi, 180, 0.4);
  return f;
}

}  // namespace

static void BM_RandomizedGossipStep(benchmark::State& state) {
  auto& f = er180();
  const auto spec = SchemeSpec::uniform_gossip(f.g);
  StateMatrix x = f.x0;
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(step_randomized_gossip(f.g, x, spec, rng));
}
BENCHMARK(BM_RandomizedGossipStep);

static void BM_LocalMaxGossipStep(benchmark::State& state) {
  auto& f = er180();
  StateMatrix x = f.x0;
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(step_local_max_gossip(f.g, x, rng));
}
BENCHMARK(BM_LocalMaxGossipStep);

static void BM_GlobalMaxGossipStep(benchmark::State& state) {
  auto& f = er180();
  StateMatrix x = f.x0;
  for (auto _ : state) benchmark::DoNotOptimize(step_global_max_gossip(f.g, x));
}
BENCHMARK(BM_GlobalMaxGossipStep);

static void BM_LoadBalancingRound(benchmark::State& state) {
  auto& f = er180();
  StateMatrix x = f.x0;
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(step_load_balancing(f.g, x, rng));
}
BENCHMARK(BM_LoadBalancingRound);

static void BM_Lyapunov(benchmark::State& state) {
  auto& f = er180();
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov(f.x0));
}
BENCHMARK(BM_Lyapunov);

static void BM_MaxEdgeScan(benchmark::State& state) {
  auto& f = er180();
  for (auto _ : state) benchmark::DoNotOptimize(max_edge(f.g, f.x0));
}
BENCHMARK(BM_MaxEdgeScan);

BENCHMARK_MAIN();
