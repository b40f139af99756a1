#pragma once
// Continuous ingredients of the main term.
//
// Sphere measure transform (unit-mass measure on the radius-lambda sphere):
//   ft(xi) = Gamma(d/2) (pi r)^{-(d-2)/2} J_{(d-2)/2}(2 pi r),  r = lambda|xi|
// with ft(0) = 1. Scaling: ft depends on lambda and xi through r alone.
// The stationary-phase estimate says |ft| <~ r^{-(d-1)/2} for r >= 1; we
// report the empirical constant |ft| r^{(d-1)/2}.
//
// Bump: tensor product of the standard smooth ramp with exact plateau
// [-1/8,1/8] and exact support [-1/4,1/4] per coordinate,
//   chi(t) = h((1/4-|t|)/(1/8)) / [h((1/4-|t|)/(1/8)) + h((|t|-1/8)/(1/8))],
//   h(s) = exp(-1/s) for s > 0, else 0.
// The cube sandwich 1_{[-1/8,1/8]^d} <= Phi <= 1_{[-1/4,1/4]^d} is exactly
// the property the decomposition uses; a radial profile would only change
// constants.

#include <span>

namespace dsphere {

struct BumpSpec {
  static constexpr double inner = 0.125;  // plateau half-width
  static constexpr double outer = 0.25;   // support half-width
};

// 1-D ramp chi(t).
double bump_ramp(double t);

// Phi(scale * xi) = prod_i chi(scale * xi_i). Scale is real so the same
// routine serves Phi_q and the tighter cutoff Phi_{lambda q / N}.
double bump(double scale, std::span<const double> xi);

// J_nu(z) for z >= 0, nu >= 0: power series below z = 12, Hankel asymptotic
// expansion above (exact for half-integer nu).
double bessel_j(double nu, double z);

// Transform of the unit sphere measure at radial argument r = lambda|xi|.
double sphere_ft_radial(int d, double r);
double sphere_ft(int d, double lambda, std::span<const double> xi);

// Slow reference path: 1-D Simpson quadrature of the surface integral,
// used by tests and the CLI self-test. Independent of bessel_j.
double sphere_ft_quadrature(int d, double r);

// |sphere_ft| * r^{(d-1)/2}; requires r >= 1 (the regime of the bound).
double stationary_phase_ratio(int d, double r);

}  // namespace dsphere
