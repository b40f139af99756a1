#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "dsphere/extremal.hpp"
#include "dsphere/lattice.hpp"
#include "dsphere/seeding.hpp"

using namespace dsphere;

namespace {

// direct count of S_lambda intersect (x + S_lambda), no sorting, no fft
std::int64_t brute_intersection(int d, std::int64_t lambda2,
                                const std::vector<std::int64_t>& x) {
  const SpherePointSet pts = enumerate_sphere(d, lambda2);
  std::int64_t count = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const auto p = pts.point(j);
    std::int64_t s2 = 0;
    for (int i = 0; i < d; ++i) {
      const std::int64_t diff = x[static_cast<std::size_t>(i)] - p[i];
      s2 += diff * diff;
    }
    if (s2 == lambda2) ++count;
  }
  return count;
}

}  // namespace

TEST_SUITE("extremal") {

TEST_CASE("self average: frozen center value, support, oracle") {
  const GridFunction avg = sphere_self_average(4, 9);
  // box of side 4 lambda + 1 around the origin
  CHECK(avg.origin == std::vector<std::int64_t>(4, -6));
  CHECK(avg.dims == std::vector<std::int64_t>(4, 13));

  // at 0 the spheres coincide: r_4(9) = 8 (1 + 3 + 9) = 104, weight 1/9
  const std::vector<std::int64_t> zero(4, 0);
  CHECK(avg.at(zero) == doctest::Approx(104.0 / 9.0).epsilon(1e-12));

  const std::vector<std::int64_t> corner{6, 6, 6, 6};
  CHECK(avg.at(corner) == 0.0);
  const std::vector<std::int64_t> outside{7, 0, 0, 0};
  CHECK(avg.at(outside) == 0.0);

  auto eng = seeded_engine({0xe572});
  std::uniform_int_distribution<std::int64_t> coord(-6, 6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::int64_t> x(4);
    for (auto& v : x) v = coord(eng);
    const double expected = double(brute_intersection(4, 9, x)) / 9.0;
    CHECK(avg.at(x) == doctest::Approx(expected).epsilon(1e-10));

    // the generating function is permutation and sign symmetric
    std::vector<std::int64_t> flipped{x[1], -x[0], x[3], -x[2]};
    CHECK(avg.at(x) == doctest::Approx(avg.at(flipped)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(sphere_self_average(4, 12), std::invalid_argument);
  CHECK_THROWS_AS(sphere_self_average(5, 81), ResourceCapError);
}

TEST_CASE("level set: axis witnesses and envelope bookkeeping") {
  // d = 4, lambda = 9: the single admissible axis point is (4,0,0,0), whose
  // intersection count is r_3(81 - 4) = 96 via n = (2, y), |y|^2 = 77
  const LevelSetReport report = level_set(4, 81, 0.1);
  CHECK(report.d == 4);
  CHECK(report.lambda2 == 81);
  CHECK(report.threshold_c == 0.1);
  REQUIRE(report.witnesses.size() == 1);
  CHECK(report.witnesses[0] == std::vector<std::int64_t>{4, 0, 0, 0});
  CHECK(report.g_size >= static_cast<std::int64_t>(report.witnesses.size()));
  CHECK(report.lower_envelope == doctest::Approx(9.0));
  CHECK(report.upper_envelope ==
        doctest::Approx(std::pow(9.0, 3.5 + 0.25)).epsilon(1e-12));
  CHECK(report.verified_samples == std::min<std::int64_t>(100, report.g_size));

  const GridFunction avg = sphere_self_average(4, 81);
  const std::vector<std::int64_t> w{4, 0, 0, 0};
  CHECK(avg.at(w) == doctest::Approx(double(brute_intersection(4, 81, w)) /
                                     81.0).epsilon(1e-10));
  CHECK(brute_intersection(4, 81, w) >= 96);

  // direct recount of |G| against the report
  const double thresh = 0.1 / 9.0;
  std::int64_t recount = 0;
  for (const double v : avg.values)
    if (v > thresh) ++recount;
  CHECK(report.g_size == recount);
}

TEST_CASE("level set: d = 5 feasible radius and empty threshold") {
  const LevelSetReport report = level_set(5, 25, 0.1);
  CHECK(report.g_size > 0);
  CHECK(report.verified_samples == 100);
  // no x1 in 4Z with 0 < x1 < 5/2: the witness list is legitimately empty
  CHECK(report.witnesses.empty());
  // fitted constant |G| / lambda^{(d+3)/2+eps} sits near 122 at this radius
  CHECK(double(report.g_size) <= 200.0 * report.upper_envelope);
  CHECK(double(report.g_size) >= report.lower_envelope);

  const GridFunction avg = sphere_self_average(5, 25);
  double top = 0.0;
  for (const double v : avg.values) top = std::max(top, v);
  const LevelSetReport empty = level_set(5, 25, (top + 1.0) * 5.0);
  CHECK(empty.g_size == 0);
  CHECK(empty.witnesses.empty());
  CHECK(empty.verified_samples == 0);

  CHECK_THROWS_AS(level_set(5, 25, 0.0), std::invalid_argument);
}

TEST_CASE("level set report serializes to json") {
  const LevelSetReport report = level_set(4, 81, 0.1);
  const nlohmann::json j = nlohmann::json::parse(to_json_string(report));
  CHECK(j["d"] == 4);
  CHECK(j["lambda2"] == 81);
  CHECK(j["g_size"] == report.g_size);
  CHECK(j["witnesses"].size() == 1);
  CHECK(j["witnesses"][0] == std::vector<std::int64_t>{4, 0, 0, 0});
  CHECK(j["verified_samples"] == report.verified_samples);
}

TEST_CASE("necessity ratio") {
  const NormCertificate cert = necessity_ratio(5, 9, 2.0);
  CHECK(cert.name == "necessity_ratio");
  CHECK(cert.params.p == 2.0);
  CHECK(cert.left > 0.0);
  CHECK(cert.right ==
        doctest::Approx(std::sqrt(double(sphere_count(5, 9)))).epsilon(1e-12));
  CHECK(std::isfinite(cert.ratio));

  // recompute the pairing from the average directly
  const GridFunction avg = sphere_self_average(5, 9);
  double pairing = 0.0;
  std::int64_t gsize = 0;
  for (const double v : avg.values)
    if (v > 0.1 / 3.0) {
      pairing += v;
      ++gsize;
    }
  CHECK(cert.left == doctest::Approx(pairing / std::sqrt(double(gsize)))
                         .epsilon(1e-10));

  // critical exponent marker rides along
  REQUIRE(!cert.extra.empty());
  CHECK(cert.extra[0].first == "p_critical");
  CHECK(cert.extra[0].second == doctest::Approx(1.4));

  const NormCertificate degenerate = necessity_ratio(5, 9, 2.0, 1e9);
  CHECK(degenerate.left == 0.0);
  CHECK(degenerate.ratio == 0.0);

  CHECK_THROWS_AS(necessity_ratio(4, 9, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(necessity_ratio(5, 9, 0.5), std::invalid_argument);
}

}  // TEST_SUITE
