#include <benchmark/benchmark.h>

#include "sibm/geometry.hpp"
#include "sibm/lattice.hpp"

using namespace sibm;

namespace {

UnionSet staircase(int k) {
  std::vector<Corner> corners;
  for (int i = 0; i < k; ++i) {
    corners.push_back(Corner{static_cast<double>(i + 1), static_cast<double>(k - i)});
  }
  return union_canonicalize(std::move(corners));
}

}  // namespace

static void BM_UnionMeasureSweep(benchmark::State& state) {
  UnionSet u = staircase(static_cast<int>(state.range(0)));
  Measure leb = Measure::lebesgue(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(union_measure(u, leb));
  }
}
BENCHMARK(BM_UnionMeasureSweep)->Arg(8)->Arg(64)->Arg(512);

static void BM_UnionCanonicalize(benchmark::State& state) {
  UnionSet u = staircase(static_cast<int>(state.range(0)));
  std::vector<Corner> shuffled = u.corners;
  std::reverse(shuffled.begin(), shuffled.end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(union_canonicalize(shuffled));
  }
}
BENCHMARK(BM_UnionCanonicalize)->Arg(8)->Arg(64);

static void BM_BuildFlow(benchmark::State& state) {
  Measure leb = Measure::lebesgue(2);
  Subsemilattice lat = random_lattice(7, 12, 10.0);
  Numbering num = consistent_numbering(lat, leb);
  CellDecomposition dec = left_neighborhoods(lat, num, leb);
  const double mesh = dec.total / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_flow(lat, num, leb, mesh));
  }
}
BENCHMARK(BM_BuildFlow)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
