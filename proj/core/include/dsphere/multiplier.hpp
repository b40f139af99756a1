#pragma once
// The exact multiplier a_lambda of the discrete spherical average, its
// main-term / residual decomposition
//   a_lambda = c_lambda + r_lambda,
//   c_lambda = sum_{1 <= q <= lambda} c_{lambda,q},
//   c_{lambda,q}(xi) = sum_{l in Z_q^d} K(lambda,q,l) Phi(q(xi - l/q))
//                      ftsigma_lambda(xi - l/q),
// the lifted multipliers m_{lambda,q}, and the certificates behind the
// N-split A_lambda f <= M_1 + M_2.
//
// ftsigma_lambda here is the transform of lambda^{-(d-2)} delta(|x|^2 -
// lambda^2): unit-mass sphere_ft times the constant mass pi^{d/2} /
// Gamma(d/2). With that scale c_lambda(0) reproduces the truncated
// singular series of the lattice point count and the residual decays.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsphere/certificate.hpp"
#include "dsphere/continuum.hpp"
#include "dsphere/expsums.hpp"
#include "dsphere/gridfn.hpp"
#include "dsphere/lattice.hpp"
#include "dsphere/seeding.hpp"

namespace dsphere {

struct MultiplierSample {
  int d = 0;
  std::int64_t lambda2 = -1;
  std::vector<double> xi;  // frequency in [0,1)^d
  std::complex<double> value;
};

struct DecompositionParams {
  int d = 0;
  std::int64_t lambda2 = -1;
  std::int64_t cutoff_n = -1;  // N; the proof split needs N < lambda
  std::int64_t q_max = 0;      // main-term range; 0 = floor(lambda)
  BumpSpec bump;
  std::vector<double> xi_grid;  // flat, stride d; empty = built-in design
  std::int64_t random_points = 10000;
  double epsilon = 0.25;
  double eta = 0.25;
  std::uint64_t seed = kDefaultSeed;
  int jobs = 0;  // 0 = hardware default
};

// a_lambda(xi) = lambda^{-(d-2)} sum_{|n|=lambda} e(xi.n). Exact real
// multiplier; throws std::runtime_error if |Im| >= 1e-8 before dropping it.
double a_multiplier(int d, std::int64_t lambda2, std::span<const double> xi,
                    const SpherePointSet* sphere = nullptr);

// Gauss tables for q = 1..q_max, shared and immutable across xi sweeps.
class MainTermCache {
 public:
  MainTermCache(int d, std::int64_t lambda2, std::int64_t q_max = 0);
  const GaussTable& table(std::int64_t q) const;
  int dim() const { return d_; }
  std::int64_t lambda2() const { return lambda2_; }
  std::int64_t q_max() const { return q_max_; }

 private:
  int d_;
  std::int64_t lambda2_;
  std::int64_t q_max_;
  std::vector<GaussTable> tables_;
};

// One summand of the main term. The bump supports around distinct l/q are
// disjoint (width 1/(2q) < spacing 1/q), so at most one l contributes; it
// is found by per-coordinate rounding, never by an l-loop.
std::complex<double> c_term(int d, std::int64_t lambda2, std::int64_t q,
                            std::span<const double> xi, BumpSpec bump = {},
                            const MainTermCache* cache = nullptr);

// c_lambda(xi) = sum over 1 <= q <= q_max (default floor(lambda)).
std::complex<double> c_main(int d, std::int64_t lambda2,
                            std::span<const double> xi, BumpSpec bump = {},
                            const MainTermCache* cache = nullptr,
                            std::int64_t q_max = 0);

// r_lambda = a_lambda - c_lambda.
std::complex<double> residual(int d, std::int64_t lambda2,
                              std::span<const double> xi, BumpSpec bump = {},
                              const MainTermCache* cache = nullptr,
                              const SpherePointSet* sphere = nullptr);

// Grid estimate of sup |r_lambda| over the torus: structured points
// l/q + delta (q <= 2 lambda, delta in {0, 1/(8q), 1/(4q)} on axis and
// diagonal rays) plus seeded random points. A lower estimate by design;
// certificate right side is lambda^{(1-d)/2 + epsilon}.
NormCertificate residual_sup_estimate(const DecompositionParams& params);

// Multiplier sampled on the frequency grid (k/L)_{k in Z_L^d}, row-major.
struct TorusMultiplier {
  int d = 0;
  std::int64_t side = 0;
  std::vector<std::complex<double>> values;
};

// m_{lambda,q}(xi) = sum_{l in Z_q^d} K(lambda,q,l) m(xi - l/q), evaluated
// on the same grid (q must divide the side). Computed per unit a through
// the separable Gauss-sum factorization, not a literal l-loop.
TorusMultiplier lift_multiplier(const TorusMultiplier& m, std::int64_t q,
                                std::int64_t lambda2);

// Checks |invFT(m_{lambda,q})(n)| <= q |invFT(m)(n)| + 1e-10 on the whole
// torus; left side of the certificate is the worst slack.
NormCertificate ft_domination_check(const TorusMultiplier& m, std::int64_t q,
                                    std::int64_t lambda2);

struct ProofSplitResult {
  std::string branch;  // "M1" (N >= lambda) or "M2"
  std::vector<NormCertificate> certs;
};

// The three certificates behind the split (N < lambda): the large-q
// multiplier bound for M_{2,2}, the high-frequency bound for M_{2,3}
// (extra cutoff at scale lambda q / N), and the kernel-side annulus bound
// for M_{1,2} against N^2 <f>_E. N >= lambda short-circuits to the single
// M_1 = A_lambda f certificate. f is the indicator of f_support, a box
// inside E = [0, lambda]^d.
ProofSplitResult proof_split_certificates(const DecompositionParams& params,
                                          const Box& f_support);

}  // namespace dsphere
