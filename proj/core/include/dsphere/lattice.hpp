#pragma once
// Lattice spheres S^d_lambda = {n in Z^d : |n|^2 = lambda^2} and admissible
// radii: for d >= 5 every lambda^2 in N is admissible, for d = 4 only
// lambda^2 not divisible by 4 (otherwise the sphere degenerates under the
// scaling n -> n/2). The count |S^d_lambda| ~ lambda^{d-2} on admissible
// radii is what normalizes the averaging operator.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsphere/certificate.hpp"
#include "dsphere/parallel.hpp"

namespace dsphere {

struct SpherePointSet {
  int d = 0;
  std::int64_t lambda2 = 0;
  std::vector<std::int16_t> coords;  // flat, point i at [i*d, (i+1)*d)

  std::size_t size() const { return d == 0 ? 0 : coords.size() / d; }
  std::span<const std::int16_t> point(std::size_t i) const {
    return {coords.data() + i * d, static_cast<std::size_t>(d)};
  }
};

// Throws std::invalid_argument for d <= 3 (no admissible-radius notion
// below dimension 4 here).
bool admissible(int d, std::int64_t lambda2);

// Exhaustive, duplicate-free, lexicographically ordered enumeration by
// recursive descent with square-residual pruning. Parallel over the first
// coordinate; output order independent of jobs.
SpherePointSet enumerate_sphere(int d, std::int64_t lambda2,
                                unsigned jobs = 1);

// Counts r_d(m) for 0 <= m <= max_lambda2 by d-fold convolution of the
// one-dimensional square-count sequence. Independent of enumerate_sphere.
std::vector<std::int64_t> sphere_counts_upto(int d, std::int64_t max_lambda2);
std::int64_t sphere_count(int d, std::int64_t lambda2);

struct CountRatioRow {
  std::int64_t lambda2 = 0;
  std::int64_t count = 0;
  double ratio = 0.0;  // count / lambda^{d-2}
};
struct CountRatioSweep {
  std::vector<CountRatioRow> rows;
  NormCertificate cert;  // left = max ratio, right = min ratio over the range
};

// Sweeps admissible lambda^2 in [lo, hi] (inadmissible values are skipped
// for d = 4). Ratios come from the convolution counts.
CountRatioSweep count_ratio_sweep(int d, std::int64_t lo, std::int64_t hi);

// Binary point-set cache: little-endian header (u32 d, i64 lambda2,
// u64 count) followed by packed int16 coordinates. load validates the
// invariant |n|^2 = lambda2 on every point and throws on any mismatch.
void save_point_cache(const SpherePointSet& s, const std::string& path);
SpherePointSet load_point_cache(const std::string& path);
std::string cache_file_name(int d, std::int64_t lambda2);

// Integer square root helper (exact floor), used by the enumeration.
std::int64_t isqrt64(std::int64_t n);

}  // namespace dsphere
