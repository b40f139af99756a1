#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

#include "dsphere/lattice.hpp"
#include "oracles.hpp"

using namespace dsphere;

namespace {

// brute force: scan the whole box [-lambda, lambda]^d
std::set<std::vector<int>> brute_sphere(int d, std::int64_t lambda2) {
  std::set<std::vector<int>> out;
  std::int64_t top = isqrt64(lambda2);
  std::vector<int> x(d, int(-top));
  for (;;) {
    std::int64_t norm = 0;
    for (int c : x) norm += std::int64_t(c) * c;
    if (norm == lambda2) out.insert(x);
    int i = d - 1;
    while (i >= 0 && x[i] == top) x[i--] = int(-top);
    if (i < 0) break;
    ++x[i];
  }
  return out;
}

std::set<std::vector<int>> as_set(const SpherePointSet& s) {
  std::set<std::vector<int>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto p = s.point(i);
    out.insert(std::vector<int>(p.begin(), p.end()));
  }
  return out;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("admissible: frozen values and domain errors") {
  CHECK(admissible(5, 4));
  CHECK_FALSE(admissible(4, 8));
  CHECK(admissible(4, 3));
  CHECK(admissible(4, 2));
  CHECK_FALSE(admissible(4, 4));
  CHECK_FALSE(admissible(4, 64));
  CHECK(admissible(6, 1000));
  CHECK_THROWS_AS(admissible(3, 9), std::invalid_argument);
  CHECK_THROWS_AS(admissible(4, 0), std::invalid_argument);
}

TEST_CASE("enumerate_sphere: frozen small counts") {
  CHECK(enumerate_sphere(4, 1).size() == 8);
  CHECK(enumerate_sphere(5, 1).size() == 10);
  CHECK(enumerate_sphere(4, 2).size() == 24);
  CHECK(enumerate_sphere(5, 0).size() == 1);
  CHECK(enumerate_sphere(2, 25).size() == 12);  // (0,±5),(±5,0),(±3,±4),(±4,±3)
  CHECK(enumerate_sphere(3, 7).size() == 0);    // 7 not a sum of 3 squares
}

TEST_CASE("enumerate_sphere matches box brute force") {
  for (auto [d, m] : std::vector<std::pair<int, std::int64_t>>{
           {2, 25}, {3, 9}, {4, 2}, {4, 12}, {4, 16}, {5, 9}, {5, 11}}) {
    CHECK(as_set(enumerate_sphere(d, m)) == brute_sphere(d, m));
  }
}

TEST_CASE("enumerate_sphere: invariants") {
  for (auto [d, m] : std::vector<std::pair<int, std::int64_t>>{
           {4, 9}, {5, 25}, {5, 49}, {6, 20}}) {
    SpherePointSet s = enumerate_sphere(d, m);
    auto pts = as_set(s);
    CHECK(pts.size() == s.size());  // no duplicates
    // norm + symmetry under negation; lexicographic storage order
    std::vector<int> prev;
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto p = s.point(i);
      std::int64_t norm = 0;
      std::vector<int> neg, cur;
      for (int c : p) {
        norm += std::int64_t(c) * c;
        neg.push_back(-c);
        cur.push_back(c);
      }
      CHECK(norm == m);
      CHECK(pts.count(neg) == 1);
      if (i > 0) CHECK(prev < cur);
      prev = cur;
    }
  }
}

TEST_CASE("enumeration is jobs-invariant") {
  SpherePointSet a = enumerate_sphere(5, 49, 1);
  SpherePointSet b = enumerate_sphere(5, 49, 4);
  CHECK(a.coords == b.coords);
}

TEST_CASE("sphere_count: convolution oracle equals enumeration") {
  CHECK(sphere_count(4, 1) == 8);
  CHECK(sphere_count(5, 0) == 1);
  CHECK(sphere_count(5, 4) == enumerate_sphere(5, 4).size());
  for (int d : {4, 5}) {
    std::vector<std::int64_t> counts = sphere_counts_upto(d, 60);
    for (std::int64_t m = 0; m <= 60; ++m)
      CHECK(counts[m] == static_cast<std::int64_t>(enumerate_sphere(d, m).size()));
  }
  // spot checks deeper in the range
  CHECK(sphere_count(5, 250) ==
        static_cast<std::int64_t>(enumerate_sphere(5, 250).size()));
  CHECK(sphere_count(4, 251) ==
        static_cast<std::int64_t>(enumerate_sphere(4, 251).size()));
}

TEST_CASE("Lagrange: non-empty spheres for d >= 4") {
  std::vector<std::int64_t> c4 = sphere_counts_upto(4, 300);
  std::vector<std::int64_t> c5 = sphere_counts_upto(5, 300);
  for (std::int64_t m = 1; m <= 300; ++m) {
    CHECK(c4[m] > 0);
    CHECK(c5[m] > 0);
  }
}

TEST_CASE("count_ratio_sweep: window certificate") {
  CountRatioSweep s5 = count_ratio_sweep(5, 1, 500);
  CHECK(s5.rows.size() == 500);
  CHECK(s5.rows.front().lambda2 == 1);
  CHECK(s5.rows.front().ratio == doctest::Approx(10.0));  // 10 points / 1
  CHECK(s5.cert.right > 0.0);                             // min ratio positive
  CHECK(s5.cert.left >= s5.cert.right);
  for (const auto& row : s5.rows) {
    CHECK(row.ratio >= s5.cert.right);
    CHECK(row.ratio <= s5.cert.left);
  }

  CountRatioSweep s4 = count_ratio_sweep(4, 1, 64);
  for (const auto& row : s4.rows) CHECK(row.lambda2 % 4 != 0);
  CHECK(s4.rows.size() == 48);  // 64 minus the 16 multiples of 4
}

TEST_CASE("point cache: round trip and corruption detection") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "dsphere_cache_test";
  fs::create_directories(dir);
  SpherePointSet s = enumerate_sphere(5, 29);
  std::string path = (dir / cache_file_name(5, 29)).string();
  save_point_cache(s, path);
  SpherePointSet r = load_point_cache(path);
  CHECK(r.d == s.d);
  CHECK(r.lambda2 == s.lambda2);
  CHECK(r.coords == s.coords);

  // flip one coordinate byte: norm invariant must catch it
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(21);
  char c = 0x7f;
  f.write(&c, 1);
  f.close();
  CHECK_THROWS_AS(load_point_cache(path), std::runtime_error);

  // truncated file
  std::ofstream t(path, std::ios::binary | std::ios::trunc);
  t.write("xx", 2);
  t.close();
  CHECK_THROWS_AS(load_point_cache(path), std::runtime_error);
  fs::remove_all(dir);
}

}  // TEST_SUITE
