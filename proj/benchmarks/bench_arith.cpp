#include <benchmark/benchmark.h>

#include "dsphere/arith.hpp"

static void BM_Factorize(benchmark::State& state) {
  std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::factorize(n));
  }
}
BENCHMARK(BM_Factorize)->Arg(44100)->Arg(999983)->Arg(1000003ull * 1000033ull);

static void BM_RhoTable(benchmark::State& state) {
  std::uint64_t qmax = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    dsphere::RhoTable table(44100, qmax);
    benchmark::DoNotOptimize(table[qmax]);
  }
}
BENCHMARK(BM_RhoTable)->Arg(10000)->Arg(100000)->Arg(1000000);

static void BM_RhoTailSum(benchmark::State& state) {
  dsphere::RhoTable table(44100, 1000000);
  for (auto _ : state) {
    auto cert = dsphere::rho_tail_sum(16, 1.5, 44100, 1000000, true, &table);
    benchmark::DoNotOptimize(cert.left);
  }
}
BENCHMARK(BM_RhoTailSum);

BENCHMARK_MAIN();
