#include <benchmark/benchmark.h>

#include "adamfind/ba_tree.hpp"
#include "adamfind/limit_laws.hpp"
#include "adamfind/packet.hpp"
#include "adamfind/rng.hpp"

using namespace adamfind;

static void BM_Grow(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto tree = grow(n, ++seed);
    benchmark::DoNotOptimize(tree.degree(1));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
  state.counters["bytes_per_vertex"] =
      static_cast<double>(grow(n, 1).memory_bytes()) / static_cast<double>(n);
}
BENCHMARK(BM_Grow)->RangeMultiplier(10)->Range(1000, 10000000)->Unit(benchmark::kMillisecond);

static void BM_EpsilonPacket(benchmark::State& state) {
  const auto tree = grow(static_cast<std::uint64_t>(state.range(0)), 7);
  for (auto _ : state) {
    auto p = epsilon_packet(tree, 0.01);
    benchmark::DoNotOptimize(p.members.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EpsilonPacket)->RangeMultiplier(10)->Range(1000, 1000000)->Unit(benchmark::kMicrosecond);

static void BM_TopK(benchmark::State& state) {
  const auto tree = grow(1000000, 7);
  for (auto _ : state) {
    auto s = top_k_degree(tree, static_cast<std::uint64_t>(state.range(0)), 3);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK(BM_TopK)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ExactTrajectory(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto r = exact_packet_trajectory(static_cast<std::uint64_t>(state.range(0)), 0.01, ++seed);
    benchmark::DoNotOptimize(r.running_max_size);
  }
}
BENCHMARK(BM_ExactTrajectory)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_SampleAdamEve(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_adam_eve_limit(rng));
}
BENCHMARK(BM_SampleAdamEve);

static void BM_SampleConditional(benchmark::State& state) {
  Rng rng(1);
  const ConditionalLimitParams p{static_cast<std::uint64_t>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(sample_limit_degree_conditional(p, rng));
}
BENCHMARK(BM_SampleConditional)->Arg(2)->Arg(100);

static void BM_JointTailQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(joint_tail_probability(1.0, 0.5, 0.05));
}
BENCHMARK(BM_JointTailQuadrature)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
