#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "dsphere/averaging.hpp"
#include "dsphere/gridfn.hpp"
#include "dsphere/lattice.hpp"
#include "dsphere/seeding.hpp"

namespace {

dsphere::GridFunction seeded_box(int d, std::int64_t side) {
  dsphere::GridFunction f = dsphere::make_box_grid(
      std::vector<std::int64_t>(static_cast<std::size_t>(d), 0),
      std::vector<std::int64_t>(static_cast<std::size_t>(d), side));
  auto rng = dsphere::seeded_engine({0xbe7cULL, static_cast<std::uint64_t>(d),
                                     static_cast<std::uint64_t>(side)});
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (double& v : f.values) v = unif(rng);
  return f;
}

}  // namespace

static void BM_EnumerateSphere(benchmark::State& state) {
  const std::int64_t m = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::enumerate_sphere(5, m));
  }
}
BENCHMARK(BM_EnumerateSphere)->Arg(25)->Arg(169)->Arg(1024)->Arg(4096);

static void BM_ConvolveDirect(benchmark::State& state) {
  const std::int64_t m = state.range(0);
  const dsphere::GridFunction f = seeded_box(5, 5);
  const dsphere::SpherePointSet sphere = dsphere::enumerate_sphere(5, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::convolve_sphere(
        f, m, dsphere::ConvMode::direct, 0, false, &sphere));
  }
}
BENCHMARK(BM_ConvolveDirect)->Arg(25)->Arg(169);

static void BM_ConvolveFft(benchmark::State& state) {
  const std::int64_t m = state.range(0);
  const dsphere::GridFunction f = seeded_box(5, 5);
  const dsphere::SpherePointSet sphere = dsphere::enumerate_sphere(5, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsphere::convolve_sphere(
        f, m, dsphere::ConvMode::fft, 0, false, &sphere));
  }
}
BENCHMARK(BM_ConvolveFft)->Arg(25)->Arg(169);

static void BM_BilinearSphereSphere(benchmark::State& state) {
  const std::int64_t m = state.range(0);
  const dsphere::SpherePointSet sphere = dsphere::enumerate_sphere(5, m);
  const auto family = dsphere::adversarial_family(5, m);
  // sphere|sphere is the heaviest pair of the family
  const dsphere::AdversarialPair* worst = nullptr;
  for (const auto& p : family)
    if (p.name == "sphere|sphere") worst = &p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dsphere::set_bilinear_form(worst->F, worst->G, m, &sphere));
  }
}
BENCHMARK(BM_BilinearSphereSphere)->Arg(25)->Arg(81)->Arg(169);
