#include "dsphere/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dsphere {

bool admissible(int d, std::int64_t lambda2) {
  if (d <= 3)
    throw std::invalid_argument("admissible: requires d >= 4");
  if (lambda2 < 1)
    throw std::invalid_argument("admissible: requires lambda2 >= 1");
  if (d >= 5) return true;
  return lambda2 % 4 != 0;
}

std::int64_t isqrt64(std::int64_t n) {
  if (n < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(double(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

namespace {

// Descend coordinates left to right; residual is what the remaining
// coordinates must sum to in squares.
void descend(int d, int depth, std::int64_t residual, std::int16_t* prefix,
             std::vector<std::int16_t>& out) {
  if (depth == d - 1) {
    std::int64_t root = isqrt64(residual);
    if (root * root != residual) return;
    if (root == 0) {
      out.insert(out.end(), prefix, prefix + d - 1);
      out.push_back(0);
      return;
    }
    out.insert(out.end(), prefix, prefix + d - 1);
    out.push_back(static_cast<std::int16_t>(-root));
    out.insert(out.end(), prefix, prefix + d - 1);
    out.push_back(static_cast<std::int16_t>(root));
    return;
  }
  std::int64_t top = isqrt64(residual);
  for (std::int64_t v = -top; v <= top; ++v) {
    prefix[depth] = static_cast<std::int16_t>(v);
    descend(d, depth + 1, residual - v * v, prefix, out);
  }
}

}  // namespace

SpherePointSet enumerate_sphere(int d, std::int64_t lambda2, unsigned jobs) {
  if (d < 2) throw std::invalid_argument("enumerate_sphere: requires d >= 2");
  if (lambda2 < 0)
    throw std::invalid_argument("enumerate_sphere: requires lambda2 >= 0");
  if (isqrt64(lambda2) > 32767)
    throw std::invalid_argument("enumerate_sphere: lambda exceeds int16 range");

  SpherePointSet set;
  set.d = d;
  set.lambda2 = lambda2;

  const std::int64_t top = isqrt64(lambda2);
  const std::size_t nfirst = static_cast<std::size_t>(2 * top + 1);
  std::vector<std::vector<std::int16_t>> blocks(nfirst);
  parallel_for(nfirst, jobs, [&](std::size_t i) {
    std::int64_t v = -top + static_cast<std::int64_t>(i);
    std::vector<std::int16_t> prefix(d);
    prefix[0] = static_cast<std::int16_t>(v);
    std::vector<std::int16_t> local;
    descend(d, 1, lambda2 - v * v, prefix.data(), local);
    blocks[i] = std::move(local);
  });
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  set.coords.reserve(total);
  for (const auto& b : blocks)
    set.coords.insert(set.coords.end(), b.begin(), b.end());
  return set;
}

std::vector<std::int64_t> sphere_counts_upto(int d, std::int64_t max_lambda2) {
  if (d < 1) throw std::invalid_argument("sphere_counts_upto: d >= 1");
  if (max_lambda2 < 0)
    throw std::invalid_argument("sphere_counts_upto: max_lambda2 >= 0");
  const std::size_t m = static_cast<std::size_t>(max_lambda2) + 1;
  std::vector<std::int64_t> cur(m, 0);
  cur[0] = 1;
  const std::int64_t top = isqrt64(max_lambda2);
  for (int fold = 0; fold < d; ++fold) {
    std::vector<std::int64_t> next(m, 0);
    for (std::size_t i = 0; i < m; ++i) next[i] = cur[i];  // k = 0
    for (std::int64_t k = 1; k <= top; ++k) {
      const std::size_t k2 = static_cast<std::size_t>(k * k);
      for (std::size_t i = k2; i < m; ++i) next[i] += 2 * cur[i - k2];
    }
    cur = std::move(next);
  }
  return cur;
}

std::int64_t sphere_count(int d, std::int64_t lambda2) {
  return sphere_counts_upto(d, lambda2)[static_cast<std::size_t>(lambda2)];
}

CountRatioSweep count_ratio_sweep(int d, std::int64_t lo, std::int64_t hi) {
  if (lo < 1 || hi < lo)
    throw std::invalid_argument("count_ratio_sweep: need 1 <= lo <= hi");
  std::vector<std::int64_t> counts = sphere_counts_upto(d, hi);
  CountRatioSweep sweep;
  double rmin = 0, rmax = 0;
  std::int64_t argmin = 0, argmax = 0;
  for (std::int64_t m = lo; m <= hi; ++m) {
    if (d == 4 && m % 4 == 0) continue;  // inadmissible, count degenerates
    double ratio =
        double(counts[static_cast<std::size_t>(m)]) /
        std::pow(double(m), 0.5 * (d - 2));
    sweep.rows.push_back({m, counts[static_cast<std::size_t>(m)], ratio});
    if (sweep.rows.size() == 1 || ratio < rmin) rmin = ratio, argmin = m;
    if (sweep.rows.size() == 1 || ratio > rmax) rmax = ratio, argmax = m;
  }
  sweep.cert.name = "count_ratio_window";
  sweep.cert.params.d = d;
  sweep.cert.set_sides(rmax, rmin);
  sweep.cert.witness = "lambda2 range [" + std::to_string(lo) + "," +
                       std::to_string(hi) + "], argmax " +
                       std::to_string(argmax) + ", argmin " +
                       std::to_string(argmin);
  sweep.cert.extra.emplace_back("tested", double(sweep.rows.size()));
  return sweep;
}

namespace {

template <class T>
void put_le(std::string& buf, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  buf.append(reinterpret_cast<char*>(b), sizeof(T));
}

template <class T>
T get_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

}  // namespace

std::string cache_file_name(int d, std::int64_t lambda2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "sphere_d%d_m%lld.spt", d,
                static_cast<long long>(lambda2));
  return buf;
}

void save_point_cache(const SpherePointSet& s, const std::string& path) {
  std::string buf;
  buf.reserve(20 + 2 * s.coords.size());
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(s.d));
  put_le<std::int64_t>(buf, s.lambda2);
  put_le<std::uint64_t>(buf, s.size());
  for (std::int16_t c : s.coords) put_le<std::int16_t>(buf, c);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_point_cache: cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("save_point_cache: write failed " + path);
}

SpherePointSet load_point_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_point_cache: cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 20)
    throw std::runtime_error("load_point_cache: truncated header");
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  SpherePointSet s;
  s.d = static_cast<int>(get_le<std::uint32_t>(p));
  s.lambda2 = get_le<std::int64_t>(p + 4);
  std::uint64_t count = get_le<std::uint64_t>(p + 12);
  if (s.d < 2 || s.d > 64)
    throw std::runtime_error("load_point_cache: bad dimension");
  if (data.size() != 20 + 2 * count * s.d)
    throw std::runtime_error("load_point_cache: size mismatch");
  s.coords.resize(count * s.d);
  for (std::size_t i = 0; i < s.coords.size(); ++i)
    s.coords[i] = get_le<std::int16_t>(p + 20 + 2 * i);
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t norm = 0;
    for (int j = 0; j < s.d; ++j) {
      std::int64_t c = s.coords[i * s.d + j];
      norm += c * c;
    }
    if (norm != s.lambda2)
      throw std::runtime_error("load_point_cache: corrupt point data");
  }
  return s;
}

}  // namespace dsphere
