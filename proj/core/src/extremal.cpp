#include "dsphere/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "dsphere/averaging.hpp"
#include "dsphere/fft.hpp"
#include "dsphere/lattice.hpp"
#include "dsphere/seeding.hpp"
#include "dsphere/summation.hpp"

namespace dsphere {
namespace {

constexpr double kSelfAverageCellCap = double(std::int64_t{1} << 26);

GridFunction sphere_indicator(int d, std::int64_t lambda2) {
  const SpherePointSet pts = enumerate_sphere(d, lambda2);
  const std::int64_t lm = isqrt64(lambda2);
  GridFunction f =
      make_box_grid(std::vector<std::int64_t>(static_cast<std::size_t>(d), -lm),
                    std::vector<std::int64_t>(static_cast<std::size_t>(d),
                                              2 * lm + 1));
  std::vector<std::int64_t> x(static_cast<std::size_t>(d));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const auto p = pts.point(j);
    for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = p[i];
    f.ref(x) = 1.0;
  }
  return f;
}

}  // namespace

GridFunction sphere_self_average(int d, std::int64_t lambda2) {
  if (!admissible(d, lambda2))
    throw std::invalid_argument(
        "sphere_self_average: lambda^2 not admissible in this dimension");
  const std::int64_t lm = isqrt64(lambda2);
  const std::int64_t side = fft::good_size(4 * lm + 2);
  double cells = 1.0;
  for (int i = 0; i < d; ++i) cells *= double(side);
  if (cells > kSelfAverageCellCap)
    throw ResourceCapError(
        "sphere_self_average: fft grid over the cell budget; lower lambda");
  const GridFunction torus =
      convolve_sphere(sphere_indicator(d, lambda2), lambda2, ConvMode::fft);

  // unwrap the cyclic result onto the centered support box; the torus side
  // exceeds the support width 4 lambda + 1, so every cell is unaliased
  const std::int64_t L = torus.dims[0];
  const std::int64_t width = 4 * lm + 1;
  GridFunction out = make_box_grid(
      std::vector<std::int64_t>(static_cast<std::size_t>(d), -2 * lm),
      std::vector<std::int64_t>(static_cast<std::size_t>(d), width));
  std::vector<std::size_t> res(static_cast<std::size_t>(width));
  for (std::int64_t o = 0; o < width; ++o)
    res[static_cast<std::size_t>(o)] =
        static_cast<std::size_t>(((o - 2 * lm) % L + L) % L);
  std::vector<std::int64_t> pos(static_cast<std::size_t>(d), 0);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    std::size_t idx = 0;
    std::int64_t s2 = 0;
    for (int k = 0; k < d; ++k) {
      const std::int64_t o = pos[static_cast<std::size_t>(k)];
      idx = idx * static_cast<std::size_t>(L) + res[static_cast<std::size_t>(o)];
      s2 += (o - 2 * lm) * (o - 2 * lm);
    }
    // outside the closed 2 lambda ball the function vanishes identically;
    // drop the fft rounding dust there
    out.values[i] = s2 > 4 * lambda2 ? 0.0 : torus.values[idx];
    int k = d - 1;
    while (k >= 0 && ++pos[static_cast<std::size_t>(k)] == width) {
      pos[static_cast<std::size_t>(k)] = 0;
      --k;
    }
  }
  return out;
}

LevelSetReport level_set(int d, std::int64_t lambda2, double c,
                         double epsilon) {
  if (!(c > 0.0))
    throw std::invalid_argument("level_set: threshold c must be positive");
  const GridFunction avg = sphere_self_average(d, lambda2);
  const std::int64_t lm = isqrt64(lambda2);
  const double lambda = std::sqrt(double(lambda2));
  const double thresh = c / lambda;

  LevelSetReport report;
  report.d = d;
  report.lambda2 = lambda2;
  report.threshold_c = c;
  report.upper_envelope = std::pow(lambda, 0.5 * double(d + 3) + epsilon);
  report.lower_envelope = lambda;

  const std::size_t cells = avg.values.size();
  std::vector<std::int64_t> pos(static_cast<std::size_t>(d), 0);
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    if (avg.values[i] > thresh) {
      ++hits;
      std::int64_t s2 = 0;
      for (int k = 0; k < d; ++k) {
        const std::int64_t cx = avg.origin[static_cast<std::size_t>(k)] +
                                pos[static_cast<std::size_t>(k)];
        s2 += cx * cx;
      }
      // supp f + supp kernel: nothing survives past the 2 lambda ball
      if (s2 > 4 * lambda2)
        throw std::runtime_error("level_set: member outside the 2 lambda ball");
    }
    int k = d - 1;
    while (k >= 0 && ++pos[static_cast<std::size_t>(k)] ==
                         avg.dims[static_cast<std::size_t>(k)]) {
      pos[static_cast<std::size_t>(k)] = 0;
      --k;
    }
  }
  report.g_size = hits;

  for (std::int64_t x1 = 4; double(x1) < lambda / 2.0; x1 += 4) {
    std::vector<std::int64_t> w(static_cast<std::size_t>(d), 0);
    w[0] = x1;
    if (avg.at(w) > thresh) report.witnesses.push_back(std::move(w));
  }

  const std::int64_t want = std::min<std::int64_t>(100, hits);
  if (want > 0) {
    std::set<std::int64_t> ranks;
    auto eng = seeded_engine({0x1e51ULL, static_cast<std::uint64_t>(d),
                              static_cast<std::uint64_t>(lambda2)});
    std::uniform_int_distribution<std::int64_t> pick(0, hits - 1);
    while (static_cast<std::int64_t>(ranks.size()) < want)
      ranks.insert(pick(eng));

    const SpherePointSet pts = enumerate_sphere(d, lambda2);
    std::vector<std::vector<std::int16_t>> sorted(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const auto p = pts.point(j);
      sorted[j].assign(p.begin(), p.end());
    }
    std::sort(sorted.begin(), sorted.end());
    const double w = std::pow(double(lambda2), -0.5 * (d - 2));

    std::fill(pos.begin(), pos.end(), 0);
    std::int64_t seen = 0;
    auto next_rank = ranks.begin();
    std::vector<std::int16_t> key(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < cells && next_rank != ranks.end(); ++i) {
      if (avg.values[i] > thresh) {
        if (seen == *next_rank) {
          // exact |S_lambda  intersect  (x + S_lambda)| by sorted lookup
          std::int64_t count = 0;
          for (std::size_t j = 0; j < pts.size(); ++j) {
            const auto p = pts.point(j);
            for (int k = 0; k < d; ++k)
              key[static_cast<std::size_t>(k)] = static_cast<std::int16_t>(
                  avg.origin[static_cast<std::size_t>(k)] +
                  pos[static_cast<std::size_t>(k)] - p[k]);
            if (std::binary_search(sorted.begin(), sorted.end(), key)) ++count;
          }
          if (std::fabs(w * double(count) - avg.values[i]) > 1e-6)
            throw std::runtime_error(
                "level_set: fft value disagrees with the intersection count");
          ++report.verified_samples;
          ++next_rank;
        }
        ++seen;
      }
      int k = d - 1;
      while (k >= 0 && ++pos[static_cast<std::size_t>(k)] ==
                           avg.dims[static_cast<std::size_t>(k)]) {
        pos[static_cast<std::size_t>(k)] = 0;
        --k;
      }
    }
  }
  return report;
}

NormCertificate necessity_ratio(int d, std::int64_t lambda2, double p,
                                double c) {
  if (d < 5)
    throw std::invalid_argument("necessity_ratio: requires d >= 5");
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("necessity_ratio: requires finite p >= 1");
  if (!(c > 0.0))
    throw std::invalid_argument("necessity_ratio: threshold c must be positive");
  const GridFunction avg = sphere_self_average(d, lambda2);
  const double lambda = std::sqrt(double(lambda2));
  const double thresh = c / lambda;

  KahanSum pairing;
  std::int64_t gsize = 0;
  for (const double v : avg.values)
    if (v > thresh) {
      pairing.add(v);
      ++gsize;
    }
  const double fsize = double(sphere_count(d, lambda2));

  NormCertificate cert;
  cert.name = "necessity_ratio";
  cert.params.d = d;
  cert.params.lambda2 = lambda2;
  cert.params.p = p;
  cert.params.threshold_c = c;
  const double left =
      gsize > 0 ? pairing.value() / std::pow(double(gsize), 1.0 / p) : 0.0;
  const double right =
      std::pow(lambda, double(d) * (1.0 - 2.0 / p)) * std::pow(fsize, 1.0 / p);
  cert.set_sides(left, right);
  cert.witness = "|G|=" + std::to_string(gsize) +
                 ",|S|=" + std::to_string(static_cast<std::int64_t>(fsize));
  cert.extra = {{"p_critical", double(d + 2) / double(d)},
                {"pairing", pairing.value()},
                {"g_size", double(gsize)},
                {"sphere_size", fsize}};
  return cert;
}

std::string to_json_string(const LevelSetReport& report) {
  nlohmann::ordered_json j;
  j["d"] = report.d;
  j["lambda2"] = report.lambda2;
  j["threshold_c"] = report.threshold_c;
  j["g_size"] = report.g_size;
  nlohmann::ordered_json w = nlohmann::ordered_json::array();
  for (const auto& point : report.witnesses) w.push_back(point);
  j["witnesses"] = w;
  j["upper_envelope"] = report.upper_envelope;
  j["lower_envelope"] = report.lower_envelope;
  j["verified_samples"] = report.verified_samples;
  return j.dump();
}

}  // namespace dsphere
