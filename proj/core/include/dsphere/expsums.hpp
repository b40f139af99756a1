#pragma once
// Quadratic Gauss sums and the Kloosterman-type sums behind the main-term
// coefficients. With e_q(x) = exp(2 pi i x / q):
//
//   g1(a, l, q) = q^{-1} sum_{n mod q} e_q(a n^2 + n l)
//   G(a/q, l)   = prod_{i=1}^d g1(a, l_i, q)        (coordinate separability)
//   K(lambda,q,l) = sum_{a in Z_q^*} e_q(-a lambda^2) G(a/q, l)
//
// K is real: a -> -a conjugates every term. The completion identity
//   sum_{l in Z_q^d} G(a/q, l) e_q(y . l) = e_q(|y|^2 a)
// is Fourier inversion on Z_q^d and is what turns the lifted multiplier
// bounds into pointwise kernel domination. The Weil-type bound
//   sup_l |K(lambda,q,l)| <~ q^{-(d-3)/2 + eta} rho(q, lambda)
// is certified as a ratio over sampled l.
//
// Z_1^* convention: the trivial group with one element (a = 0), so
// K(lambda, 1, l) = 1. The definition is silent there; this choice makes
// the q = 1 main term the plain sphere measure.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "dsphere/certificate.hpp"
#include "dsphere/seeding.hpp"

namespace dsphere {

// e_q(k) for k = 0..q-1. Subject to the test-only fault hook below.
std::vector<std::complex<double>> unit_roots(std::int64_t q);

// Fault injection for the self-test harness: perturbs every subsequently
// built root table by eps * k / q additively. 0 restores correctness.
void inject_unit_root_fault(double eps);
double unit_root_fault();

// q^{-1} sum_{n=0}^{q-1} e_q(a n^2 + n l); a, l any integers (reduced mod q).
std::complex<double> gauss_sum_1d(std::int64_t a, std::int64_t l,
                                  std::int64_t q);

// G(a/q, l) = prod_i gauss_sum_1d(a, l_i, q).
std::complex<double> gauss_sum(std::int64_t a, std::int64_t q,
                               std::span<const std::int64_t> l);

// Cached 1-D Gauss sums for one modulus: g[a][l] for a in Z_q^*, l in Z_q.
class GaussTable {
 public:
  explicit GaussTable(std::int64_t q);
  std::int64_t q() const { return q_; }
  const std::vector<std::int64_t>& units() const { return units_; }
  // value by unit index (row) and l mod q (column)
  std::complex<double> value(std::size_t unit_index, std::int64_t l) const {
    return rows_[unit_index * q_ + l];
  }

 private:
  std::int64_t q_;
  std::vector<std::int64_t> units_;
  std::vector<std::complex<double>> rows_;
};

// Factored evaluation via GaussTable; validates |Im K| < 1e-8, retrying the
// whole sum in long double on failure and throwing std::runtime_error if
// even that fails. Passing a prebuilt table for the right q avoids rebuilds
// inside sweeps.
double kloosterman(std::int64_t lambda2, std::int64_t q,
                   std::span<const std::int64_t> l,
                   const GaussTable* table = nullptr);

// Literal triple-sum oracle straight from the definition; refuses when
// q^d > 1e8. No Gauss-sum factorization anywhere in this path.
std::complex<double> kloosterman_direct(std::int64_t lambda2, std::int64_t q,
                                        std::span<const std::int64_t> l,
                                        int d);

// | sum_l G(a/q,l) e_q(y.l) - e_q(|y|^2 a) |. Factors the l-sum per
// coordinate; the literal l-loop lives in completion_check_literal.
double completion_check(std::int64_t a, std::int64_t q,
                        std::span<const std::int64_t> y);

// Literal sum over all l in Z_q^d; requires q^d <= 1e6.
double completion_check_literal(std::int64_t a, std::int64_t q,
                                std::span<const std::int64_t> y);

// max over a in Z_q^*, y in Z_q^d of completion_check (exhaustive).
double completion_max_residual(std::int64_t q, int d);

// ratio = max_l |K| / (q^{-(d-3)/2+eta} rho(q,lambda)); l exhaustive for
// q <= 8, else 64 pseudorandom l seeded from (d, q, lambda2, seed).
NormCertificate weil_ratio(std::int64_t lambda2, std::int64_t q, int d,
                           double eta, const GaussTable* table = nullptr,
                           std::uint64_t seed = kDefaultSeed);

std::vector<std::int64_t> units_mod(std::int64_t q);

}  // namespace dsphere
