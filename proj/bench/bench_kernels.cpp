// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "otter/counting.hpp"
#include "otter/enumerate.hpp"
#include "otter/sample.hpp"
#include "otter/stochastics.hpp"
#include "otter/tree.hpp"

using namespace otter;

namespace {

void BM_MulParallel(benchmark::State& state) {
  const auto a = rooted_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, a));
}

void BM_MulSerial(benchmark::State& state) {
  const auto a = rooted_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::mul(a, a));
}

void BM_CensusParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(symmetry_census(static_cast<std::size_t>(state.range(0))));
}

void BM_CensusSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::symmetry_census(static_cast<std::size_t>(state.range(0))));
}

void BM_TvExactParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tv_exact(static_cast<std::size_t>(state.range(0))));
}

void BM_TvExactSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::tv_exact(static_cast<std::size_t>(state.range(0))));
}

void BM_SymSlices(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(SymmetrySlices(n));
}

void BM_SymKSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    for (std::size_t k = 1; k <= 8; ++k) benchmark::DoNotOptimize(serial::sym_k_series(k, n));
  }
}

void BM_OrbitCount(benchmark::State& state) {
  SamplerContext ctx(1, 200);
  const FreeTree t = sample_free_approx(ctx, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(orbit_count(t));
}

void BM_OrbitCountRerooting(benchmark::State& state) {
  SamplerContext ctx(1, 200);
  const FreeTree t = sample_free_approx(ctx, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::orbit_count_by_rerooting(t));
}

void BM_SampleFreeExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SamplerContext ctx(1, n);
  for (auto _ : state) benchmark::DoNotOptimize(sample_free_exact(ctx, n));
}

}  // namespace

BENCHMARK(BM_MulParallel)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MulSerial)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusParallel)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusSerial)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TvExactParallel)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TvExactSerial)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SymSlices)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SymKSerial)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrbitCount)->Arg(100)->Arg(200);
BENCHMARK(BM_OrbitCountRerooting)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SampleFreeExact)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
