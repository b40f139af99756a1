#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "dsphere/arith.hpp"
#include "dsphere/expsums.hpp"
#include "oracles.hpp"

using namespace dsphere;
using std::complex;

namespace {

// fully literal 1-D sum, no tables
complex<double> g1_literal(std::int64_t a, std::int64_t l, std::int64_t q) {
  complex<double> s = 0;
  for (std::int64_t n = 0; n < q; ++n)
    s += oracle::e2pi(double(a * n * n + n * l) / double(q));
  return s / double(q);
}

// fully literal triple sum over a and n in Z_q^d; tiny inputs only
complex<double> kloosterman_tiny(std::int64_t lambda2, std::int64_t q,
                                 const std::vector<std::int64_t>& l) {
  const int d = static_cast<int>(l.size());
  complex<double> total = 0;
  for (std::int64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    std::vector<std::int64_t> n(d, 0);
    for (;;) {
      std::int64_t norm = 0, dot = 0;
      for (int i = 0; i < d; ++i) {
        norm += n[i] * n[i];
        dot += n[i] * l[i];
      }
      total += oracle::e2pi(double(-a * lambda2 + a * norm + dot) / double(q));
      int i = d - 1;
      while (i >= 0 && n[i] == q - 1) n[i--] = 0;
      if (i < 0) break;
      ++n[i];
    }
  }
  if (q == 1) return 1.0;
  return total / std::pow(double(q), d);
}

}  // namespace

TEST_SUITE("expsums") {

TEST_CASE("gauss_sum_1d: frozen values and literal oracle") {
  CHECK(std::abs(gauss_sum_1d(1, 0, 2)) < 1e-15);         // (1 + e^{i pi})/2
  CHECK(std::abs(gauss_sum_1d(0, 0, 5) - 1.0) < 1e-15);   // all terms 1
  CHECK(std::abs(gauss_sum_1d(1, 1, 3) - g1_literal(1, 1, 3)) < 1e-14);
  for (std::int64_t q = 1; q <= 24; ++q)
    for (std::int64_t a = 0; a < q; ++a)
      for (std::int64_t l = 0; l < q; ++l)
        CHECK(std::abs(gauss_sum_1d(a, l, q) - g1_literal(a, l, q)) < 1e-12);
  // negative arguments reduce mod q
  CHECK(std::abs(gauss_sum_1d(-2, -1, 5) - gauss_sum_1d(3, 4, 5)) < 1e-15);
}

TEST_CASE("gauss_sum: separability against direct double sum") {
  // direct 2-D sum
  auto direct2 = [](std::int64_t a, std::int64_t q, std::int64_t l1,
                    std::int64_t l2) {
    complex<double> s = 0;
    for (std::int64_t n1 = 0; n1 < q; ++n1)
      for (std::int64_t n2 = 0; n2 < q; ++n2)
        s += oracle::e2pi(
            double(a * (n1 * n1 + n2 * n2) + n1 * l1 + n2 * l2) / double(q));
    return s / double(q * q);
  };
  std::vector<std::int64_t> l{1, 2};
  CHECK(std::abs(gauss_sum(1, 3, l) - direct2(1, 3, 1, 2)) < 1e-13);
  for (std::int64_t q = 2; q <= 9; ++q)
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      std::vector<std::int64_t> lv{q - 1, 1};
      CHECK(std::abs(gauss_sum(a, q, lv) - direct2(a, q, q - 1, 1)) < 1e-12);
    }
  // a = 0, l = 0 gives 1; |G| invariant under l -> -l
  std::vector<std::int64_t> zero{0, 0, 0};
  CHECK(std::abs(gauss_sum(0, 7, zero) - 1.0) < 1e-14);
  std::vector<std::int64_t> lp{1, 2, 3}, lm{-1, -2, -3};
  CHECK(std::abs(std::abs(gauss_sum(2, 7, lp)) - std::abs(gauss_sum(2, 7, lm))) <
        1e-13);
}

TEST_CASE("GaussTable matches standalone gauss_sum_1d") {
  for (std::int64_t q : {1, 2, 5, 12}) {
    GaussTable t(q);
    for (std::size_t i = 0; i < t.units().size(); ++i)
      for (std::int64_t l = 0; l < q; ++l)
        CHECK(std::abs(t.value(i, l) - gauss_sum_1d(t.units()[i], l, q)) <
              1e-15);
  }
}

TEST_CASE("kloosterman: trivial values and tiny literal oracle") {
  std::vector<std::int64_t> zero4{0, 0, 0, 0};
  CHECK(kloosterman(7, 1, zero4) == 1.0);
  CHECK(std::abs(kloosterman_direct(7, 1, zero4, 4).real() - 1.0) < 1e-15);

  // q=2, d=5, lambda2=1, l=0 against the tiny literal sum
  std::vector<std::int64_t> zero5{0, 0, 0, 0, 0};
  CHECK(kloosterman(1, 2, zero5) ==
        doctest::Approx(kloosterman_tiny(1, 2, zero5).real()).epsilon(1e-12));

  for (std::int64_t q = 1; q <= 4; ++q)
    for (std::int64_t m = 1; m <= 6; ++m)
      for (std::int64_t l0 = 0; l0 < q; ++l0) {
        std::vector<std::int64_t> l{l0, 0, (l0 + 1) % q, 1 % q};
        complex<double> tiny = kloosterman_tiny(m, q, l);
        CHECK(std::abs(tiny.imag()) < 1e-10);  // K real
        CHECK(kloosterman(m, q, l) == doctest::Approx(tiny.real()).epsilon(1e-10));
        complex<double> direct = kloosterman_direct(m, q, l, 4);
        CHECK(std::abs(direct - tiny) < 1e-10);
      }
}

TEST_CASE("kloosterman: factored equals direct over q <= 12 grid") {
  // exhaustive l for q <= 5 at d = 4; axis-structured sample above
  for (int d : {4, 5}) {
    for (std::int64_t q = 1; q <= 12; ++q) {
      GaussTable table(q);
      std::vector<std::vector<std::int64_t>> ls;
      if (q <= 5 && d == 4) {
        std::vector<std::int64_t> l(d, 0);
        for (;;) {
          ls.push_back(l);
          int i = d - 1;
          while (i >= 0 && l[i] == q - 1) l[i--] = 0;
          if (i < 0) break;
          ++l[i];
        }
      } else {
        for (std::int64_t s = 0; s < q; ++s) {
          std::vector<std::int64_t> l(d, 0);
          l[0] = s;
          ls.push_back(l);
          std::vector<std::int64_t> l2(d, s);
          ls.push_back(l2);
        }
      }
      for (std::int64_t m : {1, 4, 9, 20}) {
        for (const auto& l : ls) {
          complex<double> direct = kloosterman_direct(m, q, l, d);
          CHECK(std::abs(direct.imag()) < 1e-8);
          CHECK(std::abs(kloosterman(m, q, l, &table) - direct.real()) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("kloosterman: regression fixture q=4, d=4, lambda2=2, l=e1") {
  // frozen from the brute-force oracle on first run
  std::vector<std::int64_t> l{1, 0, 0, 0};
  complex<double> direct = kloosterman_direct(2, 4, l, 4);
  CHECK(direct.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(direct.imag()) < 1e-12);
  CHECK(kloosterman(2, 4, l) == doctest::Approx(direct.real()).epsilon(1e-10));
}

TEST_CASE("kloosterman symmetry: l -> -l and coordinate permutations") {
  GaussTable t7(7);
  std::vector<std::int64_t> l{1, 3, 0, 5, 2};
  std::vector<std::int64_t> neg{-1, -3, 0, -5, -2};
  std::vector<std::int64_t> perm{3, 1, 5, 0, 2};
  double k = kloosterman(9, 7, l, &t7);
  CHECK(kloosterman(9, 7, neg, &t7) == doctest::Approx(k).epsilon(1e-9));
  CHECK(kloosterman(9, 7, perm, &t7) == doctest::Approx(k).epsilon(1e-9));
}

TEST_CASE("kloosterman_direct refuses oversized inputs") {
  std::vector<std::int64_t> l(4, 0);
  CHECK_THROWS_AS(kloosterman_direct(1, 101, l, 4), std::invalid_argument);
}

TEST_CASE("completion identity: examples, literal agreement, exhaustive max") {
  std::vector<std::int64_t> y12{1, 2};
  CHECK(completion_check(1, 3, y12) < 1e-9);
  std::vector<std::int64_t> y012{0, 1, 2};
  CHECK(completion_check(3, 4, y012) < 1e-9);
  std::vector<std::int64_t> y0{0};
  CHECK(completion_check(0, 1, y0) == 0.0);

  // factored path agrees with the literal l-loop
  for (std::int64_t q = 2; q <= 6; ++q)
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      std::vector<std::int64_t> y{1 % q, (q - 1), 2 % q};
      double fast = completion_check(a, q, y);
      double lit = completion_check_literal(a, q, y);
      CHECK(fast == doctest::Approx(lit).epsilon(1e-9));
      CHECK(lit < 1e-9);
    }

  // exhaustive over (a, y) for a few moduli
  for (std::int64_t q : {2, 3, 8, 16})
    CHECK(completion_max_residual(q, 3) < 1e-9);
}

TEST_CASE("weil_ratio: q=1 trivial, d=4 frozen rho, determinism") {
  NormCertificate c1 = weil_ratio(25, 1, 4, 0.25);
  CHECK(c1.ratio == doctest::Approx(1.0));

  NormCertificate c5 = weil_ratio(25, 5, 4, 0.25);
  double rho5 = 0;
  for (auto& [k, v] : c5.extra)
    if (k == "rho") rho5 = v;
  CHECK(rho5 == doctest::Approx(std::sqrt(5.0)));
  CHECK(c5.ratio > 0.0);
  CHECK(std::isfinite(c5.ratio));

  // seeded sampling is reproducible
  NormCertificate a = weil_ratio(44100, 37, 5, 0.25);
  NormCertificate b = weil_ratio(44100, 37, 5, 0.25);
  CHECK(a.left == b.left);
  CHECK(a.witness == b.witness);
}

TEST_CASE("weil_ratio: no-growth trend over q <= 60") {
  // smaller-scale version of the acceptance sweep, lambda = 210
  for (int d : {4, 5}) {
    double lo = 0, hi = 0;
    for (std::int64_t q = 1; q <= 60; ++q) {
      NormCertificate c = weil_ratio(44100, q, d, 0.25);
      (q <= 30 ? lo : hi) = std::max(q <= 30 ? lo : hi, c.ratio);
    }
    CHECK(hi <= 2.0 * lo);
  }
}

TEST_CASE("fault injection breaks the completion identity") {
  inject_unit_root_fault(1e-3);
  std::vector<std::int64_t> y{1, 2};
  double res = completion_check(1, 3, y);
  inject_unit_root_fault(0.0);
  CHECK(res > 1e-9);
  CHECK(completion_check(1, 3, y) < 1e-9);  // restored
}

}  // TEST_SUITE
