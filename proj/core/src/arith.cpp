#include "dsphere/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dsphere/summation.hpp"

namespace dsphere {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return (u128)a * b % m; }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = std::countr_zero(d);
  d >>= s;
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Brent's cycle variant of Pollard rho; deterministic c sequence.
u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    u64 q = 1;
    int lam = 1;
    while (d == 1) {
      x = y;
      for (int i = 0; i < lam; ++i) y = (mulmod(y, y, n) + c) % n;
      int k = 0;
      while (k < lam && d == 1) {
        u64 ys = y;
        int lim = std::min(128, lam - k);
        for (int i = 0; i < lim; ++i) {
          y = (mulmod(y, y, n) + c) % n;
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        d = std::gcd(q, n);
        k += lim;
        if (d == n) {
          // backtrack one step at a time
          d = 1;
          do {
            ys = (mulmod(ys, ys, n) + c) % n;
            d = std::gcd(x > ys ? x - ys : ys - x, n);
          } while (d == 1);
          break;
        }
      }
      lam *= 2;
    }
    if (d != n) return d;
  }
}

void factor_rec(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_rec(d, primes);
  factor_rec(n / d, primes);
}

}  // namespace

ArithProfile factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  ArithProfile prof;
  prof.n = n;
  u64 m = n;
  std::vector<u64> primes;
  for (u64 p = 2; p <= 1'000'000 && p * p <= m; p += (p == 2 ? 1 : 2)) {
    while (m % p == 0) {
      primes.push_back(p);
      m /= p;
    }
  }
  if (m > 1) {
    if (m <= 1'000'000'000'000ull && is_prime(m)) {
      primes.push_back(m);
    } else {
      factor_rec(m, primes);
    }
  }
  std::sort(primes.begin(), primes.end());
  for (u64 p : primes) {
    if (!prof.factors.empty() && prof.factors.back().first == p) {
      ++prof.factors.back().second;
    } else {
      prof.factors.emplace_back(p, 1);
    }
  }
  prof.omega = static_cast<int>(prof.factors.size());
  prof.divisors = {1};
  for (auto [p, e] : prof.factors) {
    std::size_t old = prof.divisors.size();
    u64 pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < old; ++j)
        prof.divisors.push_back(prof.divisors[j] * pk);
    }
  }
  std::sort(prof.divisors.begin(), prof.divisors.end());
  return prof;
}

double sigma(double b, const ArithProfile& profile) {
  KahanSum acc;
  for (u64 t : profile.divisors) acc.add(std::pow(double(t), b));
  return acc.value();
}

double sigma(double b, std::uint64_t n) { return sigma(b, factorize(n)); }

RhoDecomposition rho(std::uint64_t q, std::uint64_t lambda2) {
  if (q == 0 || lambda2 == 0)
    throw std::invalid_argument("rho: q and lambda2 must be positive");
  RhoDecomposition out;
  out.q = q;
  out.r = std::countr_zero(q);
  out.q1 = q >> out.r;
  out.t = std::gcd(out.q1, lambda2);
  out.s = out.q1 / out.t;
  out.rho = std::sqrt(double(out.t) * std::ldexp(1.0, out.r));
  return out;
}

double rho_weight(std::uint64_t q, std::uint64_t lambda2) {
  return rho(q, lambda2).rho;
}

RhoTable::RhoTable(std::uint64_t lambda2, std::uint64_t qmax)
    : lambda2_(lambda2), values_(qmax + 1, 0.0) {
  for (u64 q = 1; q <= qmax; ++q) values_[q] = rho_weight(q, lambda2);
}

double zeta_tail_bound(double m, double a) {
  // sum_{u >= M} u^{-a} <= M^{-a} + integral_M^inf x^{-a} dx
  return std::pow(m, -a) + std::pow(m, 1.0 - a) / (a - 1.0);
}

double rho_remainder_bound(std::uint64_t truncation, double a,
                           std::uint64_t lambda2) {
  // Every q > Q has q = 2^r * q1 with t = gcd(q1, lambda2) | lambda2 and
  // q1 = t*u for some u >= 1, so
  //   sum_{q>Q} q^{-a} rho <= sum_{t | lambda2} sum_{r>=0} t^{1/2-a}
  //                           2^{r(1/2-a)} sum_{u >= u0(t,r)} u^{-a}
  // with u0 = max(1, floor(Q/(t 2^r)) + 1). Once t*2^r > Q the inner sum is
  // the full zeta tail from 1 and the r-sum closes geometrically (needs
  // a > 1/2; we require a > 1 anyway).
  const double q_factor = 1.0 / (1.0 - std::pow(2.0, 0.5 - a));
  const double full_tail = zeta_tail_bound(1.0, a);
  ArithProfile prof = factorize(lambda2);
  KahanSum total;
  for (u64 t : prof.divisors) {
    double t_pow = std::pow(double(t), 0.5 - a);
    int r = 0;
    double pow2 = 1.0;  // 2^{r(1/2-a)}
    const double step = std::pow(2.0, 0.5 - a);
    for (; (u128)t << r <= truncation; ++r, pow2 *= step) {
      u64 u0 = truncation / (t << r) + 1;
      total.add(t_pow * pow2 * zeta_tail_bound(double(u0), a));
    }
    total.add(t_pow * pow2 * q_factor * full_tail);
  }
  return total.value();
}

NormCertificate rho_tail_sum(std::uint64_t n_cut, double a,
                             std::uint64_t lambda2, std::uint64_t truncation,
                             bool include_remainder, const RhoTable* table) {
  if (a <= 1.0)
    throw std::invalid_argument("rho_tail_sum: a must exceed 1, sum diverges");
  if (n_cut == 0) throw std::invalid_argument("rho_tail_sum: N must be >= 1");
  RhoTable local(0, 0);
  if (table == nullptr || table->lambda2() != lambda2 ||
      table->qmax() < truncation) {
    local = RhoTable(lambda2, truncation);
    table = &local;
  }
  KahanSum left;
  for (u64 q = n_cut; q <= truncation; ++q)
    left.add(std::pow(double(q), -a) * (*table)[q]);
  double remainder = 0.0;
  if (include_remainder) remainder = rho_remainder_bound(truncation, a, lambda2);

  NormCertificate cert;
  cert.name = "rho_tail_sum";
  cert.params.lambda2 = static_cast<std::int64_t>(lambda2);
  cert.params.cutoff_n = static_cast<std::int64_t>(n_cut);
  cert.set_sides(left.value() + remainder,
                 std::pow(double(n_cut), 1.0 - a) * sigma(-0.5, lambda2));
  cert.witness = "q in [" + std::to_string(n_cut) + "," +
                 std::to_string(truncation) + "]" +
                 (include_remainder ? " + analytic remainder" : "");
  cert.extra.emplace_back("a", a);
  cert.extra.emplace_back("truncation", double(truncation));
  cert.extra.emplace_back("remainder_bound", remainder);
  return cert;
}

NormCertificate rho_head_sum(std::uint64_t n_cut, double eta,
                             std::uint64_t lambda2, const RhoTable* table) {
  if (n_cut == 0) throw std::invalid_argument("rho_head_sum: N must be >= 1");
  RhoTable local(0, 0);
  if (table == nullptr || table->lambda2() != lambda2 ||
      table->qmax() < n_cut) {
    local = RhoTable(lambda2, n_cut);
    table = &local;
  }
  KahanSum left;
  for (u64 q = 1; q <= n_cut; ++q)
    left.add(std::pow(double(q), eta) * (*table)[q]);

  NormCertificate cert;
  cert.name = "rho_head_sum";
  cert.params.lambda2 = static_cast<std::int64_t>(lambda2);
  cert.params.cutoff_n = static_cast<std::int64_t>(n_cut);
  cert.params.eta = eta;
  cert.set_sides(left.value(),
                 std::pow(double(n_cut), 1.0 + eta) * sigma(-0.5, lambda2));
  cert.witness = "q in [1," + std::to_string(n_cut) + "]";
  return cert;
}

double sigma_prime_product_bound(std::uint64_t n) {
  ArithProfile prof = factorize(n);
  double prod = 1.0;
  for (u64 p : first_primes(prof.omega))
    prod /= 1.0 - 1.0 / std::sqrt(double(p));
  return prod;
}

std::vector<std::uint64_t> first_primes(int k) {
  std::vector<u64> out;
  for (u64 c = 2; static_cast<int>(out.size()) < k; ++c) {
    bool prime = true;
    for (u64 p : out) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(c);
  }
  return out;
}

}  // namespace dsphere
