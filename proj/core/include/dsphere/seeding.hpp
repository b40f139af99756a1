#pragma once
// Deterministic seeding. Every randomized routine derives its engine from the
// user seed plus its structural parameters (d, q, lambda^2, ...), so two runs
// with the same flags produce identical output and runs with different
// parameters do not share streams.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dsphere {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eedULL;

// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;  // pi digits, nothing up the sleeve
  for (std::uint64_t p : parts) h = mix64(h ^ p);
  return h;
}

inline std::mt19937_64 seeded_engine(std::initializer_list<std::uint64_t> parts) {
  return std::mt19937_64(mix_seed(parts));
}

}  // namespace dsphere
