#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "dsphere/continuum.hpp"
#include "dsphere/lattice.hpp"
#include "dsphere/multiplier.hpp"

static void BM_SphereFt(benchmark::State& state) {
  const double r = 0.1 * static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::sphere_ft_radial(5, r));
  }
}
BENCHMARK(BM_SphereFt)->Arg(1)->Arg(50)->Arg(400);

static void BM_AMultiplier(benchmark::State& state) {
  const std::int64_t m = state.range(0);
  const dsphere::SpherePointSet sphere = dsphere::enumerate_sphere(5, m);
  const std::vector<double> xi{0.11, 0.23, 0.31, 0.41, 0.07};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::a_multiplier(5, m, xi, &sphere));
  }
}
BENCHMARK(BM_AMultiplier)->Arg(25)->Arg(169);

static void BM_CMain(benchmark::State& state) {
  const std::int64_t m = state.range(0);
  const dsphere::MainTermCache cache(5, m);
  const std::vector<double> xi{0.11, 0.23, 0.31, 0.41, 0.07};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::c_main(5, m, xi, {}, &cache));
  }
}
BENCHMARK(BM_CMain)->Arg(25)->Arg(169);

static void BM_MainTermCache(benchmark::State& state) {
  const std::int64_t m = state.range(0);
  for (auto _ : state) {
    dsphere::MainTermCache cache(5, m);
    benchmark::DoNotOptimize(cache.q_max());
  }
}
BENCHMARK(BM_MainTermCache)->Arg(169)->Arg(1024);
