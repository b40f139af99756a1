#pragma once
// The discrete spherical averaging operator on grid functions:
//   A f(x) = lambda^{-(d-2)} * sum_{|n|^2 = lambda^2} f(x - n),
// plus the norm / bilinear-form machinery built on it (local averages,
// improving ratios, adversarial indicator families, dyadic maximal forms).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsphere/certificate.hpp"
#include "dsphere/gridfn.hpp"
#include "dsphere/lattice.hpp"
#include "dsphere/seeding.hpp"

namespace dsphere {

enum class ConvMode { direct, fft };
ConvMode parse_conv_mode(const std::string& s);

// A_lambda f. direct: exact scatter; output box grows by floor(lambda) per
// side (periodic input stays on its torus). fft: cyclic convolution on a
// torus of side `torus_side` (0 = smallest fast size with no wraparound);
// requires torus_side >= support side + 2*lambda + 1 for box inputs.
// Inadmissible (d, lambda2) is rejected unless allow_inadmissible is set.
GridFunction convolve_sphere(const GridFunction& f, std::int64_t lambda2,
                             ConvMode mode, std::int64_t torus_side = 0,
                             bool allow_inadmissible = false,
                             const SpherePointSet* sphere = nullptr);

// fft-mode batch over a common box: packs input pairs into one complex
// transform each (the kernel transform is computed once). Outputs match
// convolve_sphere(fs[i], ...) to roundoff.
std::vector<GridFunction> convolve_sphere_batch(
    std::span<const GridFunction> fs, std::int64_t lambda2,
    std::int64_t torus_side = 0, bool allow_inadmissible = false,
    const SpherePointSet* sphere = nullptr);

// (|Q|^{-1} sum_{x in Q} |f(x)|^p)^{1/p}; p = inf gives sup_Q |f|.
// f is zero-extended outside its box.
double local_norm(const GridFunction& f, const Box& Q, double p);

// <A_lambda f, g> = sum_x (A_lambda f)(x) g(x), computed by gathering f
// over the sphere at each point of g's box.
double bilinear_form(const GridFunction& f, const GridFunction& g,
                     std::int64_t lambda2,
                     const SpherePointSet* sphere = nullptr);

// <A_lambda 1_F, 1_G> for point sets; iterates the smaller set against a
// bitmap of the larger one.
double set_bilinear_form(const LatticeSet& F, const LatticeSet& G,
                         std::int64_t lambda2,
                         const SpherePointSet* sphere = nullptr);

// <A_lambda 1_F, 1_G> / (lambda^{d(1-2/p)} |F|^{1/p} |G|^{1/p}).
// extra["p_in_range"] records the (d+1)/(d-1) < p <= 2 check.
NormCertificate improving_ratio(const LatticeSet& F, const LatticeSet& G,
                                std::int64_t lambda2, double p,
                                const SpherePointSet* sphere = nullptr,
                                const std::string& label = "");

// <A_lambda f1, f2> / (<f1>_{Q,p1} <f2>_{Q,p2} |Q|) with <f>_{Q,p} the
// normalized local norm. extra["exponents_in_range"] records whether
// (1/p1, 1/p2) lies in the open triangle with vertices (0,1), (1,0),
// ((d-1)/(d+1), (d-1)/(d+1)).
NormCertificate corollary_ratio(const GridFunction& f1, const GridFunction& f2,
                                const Box& Q, double p1, double p2,
                                std::int64_t lambda2);

struct AdversarialPair {
  std::string name;  // "F|G" with the set names
  LatticeSet F, G;
};

// Deterministic stress family for (d, lambda2): deltas, balls of radius
// 1 / lambda/4 / lambda/2, the sphere itself, a width-2 annulus, and seeded
// random sets of two densities; >= 12 pairs including (delta, sphere).
std::vector<AdversarialPair> adversarial_family(int d, std::int64_t lambda2,
                                                std::uint64_t seed = kDefaultSeed);

// <sup_{lambda0/2 < lambda < lambda0} A_lambda f, g> normalized by
// <f>_{E,p} <g>_{E,p} |E| at p = d/(d-2). The sup runs over admissible
// lambda^2 in the open window; an empty window is an error.
NormCertificate dyadic_maximal_form(const GridFunction& f,
                                    const GridFunction& g, const Box& E,
                                    std::int64_t lambda0);

}  // namespace dsphere
