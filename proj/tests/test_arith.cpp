#include <doctest.h>

#include <cmath>
#include <random>

#include "dsphere/arith.hpp"
#include "oracles.hpp"

using namespace dsphere;

TEST_SUITE("arith") {

TEST_CASE("factorize: edge cases and frozen values") {
  ArithProfile one = factorize(1);
  CHECK(one.factors.empty());
  CHECK(one.omega == 0);
  CHECK(one.divisors == std::vector<std::uint64_t>{1});

  ArithProfile twelve = factorize(12);
  CHECK(twelve.factors ==
        std::vector<std::pair<std::uint64_t, int>>{{2, 2}, {3, 1}});
  CHECK(twelve.omega == 2);
  CHECK(twelve.divisors == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});

  ArithProfile f49 = factorize(49);
  CHECK(f49.factors == std::vector<std::pair<std::uint64_t, int>>{{7, 2}});
  CHECK(f49.omega == 1);

  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize matches trial-division oracle") {
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    ArithProfile p = factorize(n);
    CHECK(p.factors == oracle::trial_factor(n));
    std::uint64_t prod = 1;
    std::size_t ndiv = 1;
    for (auto [pr, e] : p.factors) {
      for (int i = 0; i < e; ++i) prod *= pr;
      ndiv *= e + 1;
    }
    CHECK(prod == n);
    CHECK(p.divisors.size() == ndiv);
  }
  // sample of larger n, including 64-bit semiprimes for the Pollard path
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t n = rng() % 1'000'000 + 1;
    CHECK(factorize(n).divisors == oracle::divisor_scan(n));
  }
  ArithProfile big = factorize(1000003ull * 1000033ull);
  CHECK(big.factors == std::vector<std::pair<std::uint64_t, int>>{
                           {1000003, 1}, {1000033, 1}});
}

TEST_CASE("sigma: frozen values and oracle sweep") {
  CHECK(sigma(-0.5, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sigma(-0.5, 4) ==
        doctest::Approx(1.0 + 1.0 / std::sqrt(2.0) + 0.5).epsilon(1e-14));
  CHECK(sigma(-0.5, 4) == doctest::Approx(2.2071067811865475).epsilon(1e-14));
  CHECK(sigma(0.0, 12) == doctest::Approx(6.0).epsilon(1e-14));

  std::mt19937_64 rng(777);
  for (int i = 0; i < 300; ++i) {
    std::uint64_t n = rng() % 1'000'000 + 1;
    double b = -1.5 + (i % 7) * 0.5;
    CHECK(sigma(b, n) == doctest::Approx(oracle::sigma_scan(b, n)).epsilon(1e-10));
  }
}

TEST_CASE("rho: decomposition invariants and frozen values") {
  CHECK(rho(1, 9).rho == doctest::Approx(1.0));
  CHECK(rho(2, 9).rho == doctest::Approx(std::sqrt(2.0)));

  RhoDecomposition d12 = rho(12, 9);
  CHECK(d12.q1 == 3);
  CHECK(d12.r == 2);
  CHECK(d12.t == 3);
  CHECK(d12.s == 1);
  CHECK(d12.rho == doctest::Approx(std::sqrt(12.0)).epsilon(1e-14));

  std::mt19937_64 rng(31337);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t q = rng() % 100000 + 1;
    std::uint64_t l2 = rng() % 1000000 + 1;
    RhoDecomposition d = rho(q, l2);
    CHECK(d.q1 % 2 == 1);
    CHECK((d.q1 << d.r) == q);
    CHECK(d.q1 % d.t == 0);
    CHECK(l2 % d.t == 0);
    CHECK(d.s * d.t == d.q1);
    // rho^2 = t * 2^r exactly in integers
    std::uint64_t rho_sq = d.t << d.r;
    CHECK(d.rho * d.rho == doctest::Approx(double(rho_sq)).epsilon(1e-12));
    CHECK(d.rho == doctest::Approx(oracle::rho_naive(q, l2)).epsilon(1e-12));
  }
}

TEST_CASE("rho_tail_sum: empty range, oracle value, remainder sanity") {
  // truncation below N and no remainder: empty sum
  NormCertificate empty = rho_tail_sum(4, 2.0, 25, 3, false);
  CHECK(empty.left == 0.0);
  CHECK(empty.right > 0.0);

  CHECK_THROWS_AS(rho_tail_sum(4, 1.0, 25), std::invalid_argument);
  CHECK_THROWS_AS(rho_tail_sum(4, 0.5, 25), std::invalid_argument);

  // oracle: literal summation q = 4..20000
  const std::uint64_t trunc = 20000;
  double lit = 0;
  for (std::uint64_t q = 4; q <= trunc; ++q)
    lit += std::pow(double(q), -2.0) * oracle::rho_naive(q, 25);
  NormCertificate c = rho_tail_sum(4, 2.0, 25, trunc, false);
  CHECK(c.left == doctest::Approx(lit).epsilon(1e-12));
  CHECK(c.right == doctest::Approx(std::pow(4.0, -1.0) * sigma(-0.5, 25)));

  // remainder bound: nonnegative, dominates the dropped terms
  NormCertificate with_rem = rho_tail_sum(4, 2.0, 25, 1000, true);
  double dropped = 0;
  for (std::uint64_t q = 1001; q <= 200000; ++q)
    dropped += std::pow(double(q), -2.0) * oracle::rho_naive(q, 25);
  double rem = 0;
  for (auto& [k, v] : with_rem.extra)
    if (k == "remainder_bound") rem = v;
  CHECK(rem >= dropped);
  CHECK(rem < 10 * with_rem.right);  // not absurdly loose at this scale
}

TEST_CASE("rho_tail_sum / rho_head_sum: ratio bounded across N sweep") {
  for (std::uint64_t l2 : {9ull, 25ull, 360ull, 44100ull}) {
    RhoTable table(l2, 50000);
    double lo_max = 0, hi_max = 0;
    for (std::uint64_t n = 2; n <= 256; n *= 2) {
      NormCertificate t = rho_tail_sum(n, 1.5, l2, 50000, true, &table);
      NormCertificate h = rho_head_sum(n, 0.25, l2, &table);
      CHECK(t.ratio > 0.0);
      CHECK(h.ratio > 0.0);
      double m = std::max(t.ratio, h.ratio);
      (n <= 16 ? lo_max : hi_max) = std::max(n <= 16 ? lo_max : hi_max, m);
    }
    // no growth trend across the sweep
    CHECK(hi_max <= 2.0 * lo_max);
  }
}

TEST_CASE("rho_head_sum: single term and oracle value") {
  NormCertificate n1 = rho_head_sum(1, 0.1, 49);
  CHECK(n1.left == doctest::Approx(1.0));  // rho(1, lambda) = 1

  double lit = 0;
  for (std::uint64_t q = 1; q <= 8; ++q)
    lit += std::pow(double(q), 0.1) * oracle::rho_naive(q, 9);
  NormCertificate c = rho_head_sum(8, 0.1, 9);
  CHECK(c.left == doctest::Approx(lit).epsilon(1e-12));
  CHECK(c.right == doctest::Approx(std::pow(8.0, 1.1) * sigma(-0.5, 9)));
}

TEST_CASE("sigma_prime_product_bound dominates sigma(-1/2)") {
  CHECK(sigma_prime_product_bound(1) == doctest::Approx(1.0));
  CHECK(sigma_prime_product_bound(2) ==
        doctest::Approx(1.0 / (1.0 - 1.0 / std::sqrt(2.0))).epsilon(1e-14));
  CHECK(sigma(-0.5, 2) == doctest::Approx(1.7071067811865475));

  double b30 = sigma_prime_product_bound(30);
  double expect30 = 1.0;
  for (double p : {2.0, 3.0, 5.0}) expect30 /= 1.0 - 1.0 / std::sqrt(p);
  CHECK(b30 == doctest::Approx(expect30).epsilon(1e-14));

  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    std::uint64_t n = rng() % 1'000'000 + 1;
    CHECK(sigma(-0.5, n) <= sigma_prime_product_bound(n) * (1 + 1e-12));
  }
}

TEST_CASE("first_primes") {
  CHECK(first_primes(0).empty());
  CHECK(first_primes(5) == std::vector<std::uint64_t>{2, 3, 5, 7, 11});
}

}  // TEST_SUITE
