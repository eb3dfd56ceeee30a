#include <benchmark/benchmark.h>

#include "sibm/verify.hpp"

using namespace sibm;

static void BM_BmSuite(benchmark::State& state) {
  PathSample path = reference_bm_path(3, static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bm_suite(path, 0.01));
  }
}
BENCHMARK(BM_BmSuite)->Arg(1000)->Arg(10000);

static void BM_McExit(benchmark::State& state) {
  Measure leb = Measure::lebesgue(2);
  Flow flow = corner_flow(Corner{9, 9}, leb, 0.05);
  std::uint64_t seed = 0;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_exit(flow, -1.0, 2.0, n, seed++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McExit)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_McFirstPassage(benchmark::State& state) {
  Measure leb = Measure::lebesgue(2);
  Flow flow = corner_flow(Corner{1, 1}, leb, 0.001);
  std::uint64_t seed = 0;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_first_passage(flow, 1.0, n, seed++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McFirstPassage)->Arg(1000)->Unit(benchmark::kMillisecond);
