#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "dsphere/expsums.hpp"

static void BM_GaussTable(benchmark::State& state) {
  const std::int64_t q = state.range(0);
  for (auto _ : state) {
    dsphere::GaussTable table(q);
    benchmark::DoNotOptimize(table.value(0, 0));
  }
}
BENCHMARK(BM_GaussTable)->Arg(16)->Arg(97)->Arg(512);

static void BM_KloostermanFactored(benchmark::State& state) {
  const std::int64_t q = state.range(0);
  const dsphere::GaussTable table(q);
  const std::vector<std::int64_t> l{1, 2, 3, 4, 5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::kloosterman(40401, q, l, &table));
  }
}
BENCHMARK(BM_KloostermanFactored)->Arg(16)->Arg(97)->Arg(512);

static void BM_KloostermanDirect(benchmark::State& state) {
  const std::int64_t q = state.range(0);
  const std::vector<std::int64_t> l{1, 2, 3, 4, 5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::kloosterman_direct(40401, q, l, 5));
  }
}
BENCHMARK(BM_KloostermanDirect)->Arg(4)->Arg(8)->Arg(16);

static void BM_WeilRatio(benchmark::State& state) {
  const std::int64_t q = state.range(0);
  const dsphere::GaussTable table(q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::weil_ratio(40401, q, 5, 0.25, &table));
  }
}
BENCHMARK(BM_WeilRatio)->Arg(8)->Arg(97)->Arg(512);
