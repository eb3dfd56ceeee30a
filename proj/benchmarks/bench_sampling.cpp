#include <benchmark/benchmark.h>

#include "sibm/lattice.hpp"
#include "sibm/processes.hpp"

using namespace sibm;

namespace {

Flow uniform_clock_flow(std::size_t steps, double dtheta) {
  Flow flow;
  flow.mesh = dtheta;
  for (std::size_t i = 0; i <= steps; ++i) {
    flow.alphas.push_back(static_cast<double>(i));
    flow.clock.push_back(dtheta * static_cast<double>(i));
  }
  return flow;
}

}  // namespace

static void BM_SampleBmPath(benchmark::State& state) {
  Flow flow = uniform_clock_flow(static_cast<std::size_t>(state.range(0)), 1e-3);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_bm_path(flow, seed++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleBmPath)->Arg(1000)->Arg(10000);

static void BM_SampleField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Measure leb = Measure::lebesgue(2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_field(ProcessModel::sibm(), n, 1.0, leb, seed++));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SampleField)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_EvaluateSet(benchmark::State& state) {
  Measure leb = Measure::lebesgue(2);
  FieldSample field(ProcessModel::sibm(), 256, 1.0, leb, 1);
  std::vector<Corner> corners;
  for (int i = 0; i < 8; ++i) {
    corners.push_back(Corner{0.1 + 0.1 * i, 0.9 - 0.1 * i});
  }
  UnionSet u = union_canonicalize(std::move(corners));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_set(field, u));
  }
}
BENCHMARK(BM_EvaluateSet);

static void BM_ProjectPath(benchmark::State& state) {
  Measure leb = Measure::lebesgue(2);
  FieldSample field(ProcessModel::sibm(), 256, 1.0, leb, 2);
  UnionSet full = union_canonicalize({Corner{1, 1}});
  Flow flow = extend_sequence({union_canonicalize({Corner{1, 0.25}}), full}, leb, 0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_path(field, flow));
  }
}
BENCHMARK(BM_ProjectPath);
