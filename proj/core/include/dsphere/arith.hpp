#pragma once
// Integer factorization and the arithmetic weights that control the
// circle-method error terms: omega(n), the generalized divisor sums
// sigma_b(n) = sum_{t|n} t^b, and the Kloosterman weight
//
//   rho(q, lambda)^2 = gcd(q1, lambda^2) * 2^r,   q = q1 * 2^r, q1 odd.
//
// The tail sums sum_{q >= N} q^{-a} rho(q,lambda) and head sums
// sum_{q <= N} q^eta rho(q,lambda) are certified against
// N^{1-a} sigma_{-1/2}(lambda^2) and N^{1+eta} sigma_{-1/2}(lambda^2).

#include <cstdint>
#include <utility>
#include <vector>

#include "dsphere/certificate.hpp"

namespace dsphere {

struct ArithProfile {
  std::uint64_t n = 1;
  std::vector<std::pair<std::uint64_t, int>> factors;  // (prime, exponent), ascending
  std::vector<std::uint64_t> divisors;                 // sorted ascending
  int omega = 0;                                       // = factors.size()
};

// Deterministic: trial division through 1e6, Brent-Pollard beyond.
// Throws std::invalid_argument on n = 0.
ArithProfile factorize(std::uint64_t n);

double sigma(double b, const ArithProfile& profile);
double sigma(double b, std::uint64_t n);

struct RhoDecomposition {
  std::uint64_t q = 1;
  std::uint64_t q1 = 1;  // odd part
  int r = 0;             // q = q1 * 2^r
  std::uint64_t t = 1;   // gcd(q1, lambda2)
  std::uint64_t s = 1;   // q1 / t
  double rho = 1.0;      // sqrt(t * 2^r); rho^2 = t << r exactly in integers
};

RhoDecomposition rho(std::uint64_t q, std::uint64_t lambda2);
double rho_weight(std::uint64_t q, std::uint64_t lambda2);

// rho(q, lambda) for q = 1..qmax, precomputed once per lambda2 so that
// N-sweeps cost O(qmax) per query instead of O(qmax) gcds.
class RhoTable {
 public:
  RhoTable(std::uint64_t lambda2, std::uint64_t qmax);
  double operator[](std::uint64_t q) const { return values_[q]; }
  std::uint64_t qmax() const { return values_.size() - 1; }
  std::uint64_t lambda2() const { return lambda2_; }

 private:
  std::uint64_t lambda2_;
  std::vector<double> values_;  // index 0 unused
};

// Upper bound for sum_{u >= M} u^{-a}, a > 1, M >= 1.
double zeta_tail_bound(double m, double a);

// Rigorous upper bound for sum_{q > Q} q^{-a} rho(q, lambda). Valid for
// a > 1. Enumerates divisors t | lambda2 and dyadic levels r, closing the
// large-r range with a geometric series; double counting between divisor
// classes only inflates the bound.
double rho_remainder_bound(std::uint64_t truncation, double a,
                           std::uint64_t lambda2);

// left = sum_{N <= q <= truncation} q^{-a} rho(q,lambda)
//        (+ rho_remainder_bound if include_remainder)
// right = N^{1-a} sigma_{-1/2}(lambda2).
// Throws std::invalid_argument if a <= 1 (the q-sum diverges).
NormCertificate rho_tail_sum(std::uint64_t n_cut, double a,
                             std::uint64_t lambda2,
                             std::uint64_t truncation = 1'000'000,
                             bool include_remainder = true,
                             const RhoTable* table = nullptr);

// left = sum_{1 <= q <= N} q^eta rho(q,lambda),
// right = N^{1+eta} sigma_{-1/2}(lambda2).
NormCertificate rho_head_sum(std::uint64_t n_cut, double eta,
                             std::uint64_t lambda2,
                             const RhoTable* table = nullptr);

// Product over the first omega(n) primes of (1 - p^{-1/2})^{-1}; dominates
// sigma_{-1/2}(n) because each factor (1 - p^{-1/2})^{-1} exceeds the
// truncated geometric series over the actual prime powers of n.
double sigma_prime_product_bound(std::uint64_t n);

// First k primes, ascending.
std::vector<std::uint64_t> first_primes(int k);

}  // namespace dsphere
