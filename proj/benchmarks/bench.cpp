#include <benchmark/benchmark.h>

#include "d2match/algorithms.hpp"
#include "d2match/certificates.hpp"
#include "d2match/estimate.hpp"
#include "d2match/instance.hpp"
#include "d2match/oracle.hpp"
#include "d2match/phase_graph.hpp"
#include "d2match/random.hpp"

namespace {

using namespace d2match;

void BM_HalfHalfPhaseGraph(benchmark::State& state) {
  const Instance inst = build_phase_graph(static_cast<int>(state.range(0))).instance;
  std::uint64_t trial = 0;
  const RandomSource source(1);
  for (auto _ : state) {
    RandomStream stream = source.stream(trial++);
    benchmark::DoNotOptimize(half_half(inst, stream).size);
  }
  state.SetItemsProcessed(state.iterations() * inst.arrival_count());
}
BENCHMARK(BM_HalfHalfPhaseGraph)->Arg(8)->Arg(12)->Arg(16);

void BM_WaterLevelRandom(benchmark::State& state) {
  const Instance inst = gen_random(static_cast<std::int32_t>(state.range(0)),
                                   static_cast<std::int32_t>(2 * state.range(0)), 0.7, 42);
  for (auto _ : state) benchmark::DoNotOptimize(water_level(inst).total_value());
}
BENCHMARK(BM_WaterLevelRandom)->Arg(32)->Arg(256);

void BM_MaxMatchingPhaseGraph(benchmark::State& state) {
  const Instance inst = build_phase_graph(static_cast<int>(state.range(0))).instance;
  for (auto _ : state) benchmark::DoNotOptimize(max_matching(inst).size);
}
BENCHMARK(BM_MaxMatchingPhaseGraph)->Arg(10)->Arg(14);

void BM_ExactExpectation(benchmark::State& state) {
  const Instance inst = gen_random(static_cast<std::int32_t>(state.range(0)),
                                   static_cast<std::int32_t>(2 * state.range(0)), 0.8, 7);
  for (auto _ : state) benchmark::DoNotOptimize(exact_expected_half_half(inst).get_d());
}
BENCHMARK(BM_ExactExpectation)->Arg(8)->Arg(12)->Arg(16);

void BM_CertifyIntegral(benchmark::State& state) {
  const Instance inst = gen_random(static_cast<std::int32_t>(state.range(0)),
                                   static_cast<std::int32_t>(2 * state.range(0)), 0.6, 11);
  for (auto _ : state) benchmark::DoNotOptimize(certify_integral_run(inst).opt);
}
BENCHMARK(BM_CertifyIntegral)->Arg(16)->Arg(64);

void BM_CertifyFractional(benchmark::State& state) {
  const Instance inst = gen_random(static_cast<std::int32_t>(state.range(0)),
                                   static_cast<std::int32_t>(2 * state.range(0)), 0.6, 11);
  for (auto _ : state) benchmark::DoNotOptimize(certify_fractional_run(inst).opt);
}
BENCHMARK(BM_CertifyFractional)->Arg(16)->Arg(64);

void BM_EstimateRatio(benchmark::State& state) {
  DistributionSpec spec;
  spec.kind = DistributionSpec::Kind::kPermuted;
  spec.instance = build_phase_graph(8).instance;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_ratio(AlgorithmId::kHalfHalf, spec, 1000,
                       static_cast<std::uint64_t>(state.iterations()),
                       static_cast<int>(state.range(0)))
            .mean);
  }
}
BENCHMARK(BM_EstimateRatio)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
