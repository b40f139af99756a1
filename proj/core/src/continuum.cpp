#include "dsphere/continuum.hpp"

#include <cmath>
#include <stdexcept>

namespace dsphere {

namespace {

const double kPi = std::acos(-1.0);

double h_ramp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double bump_ramp(double t) {
  double a = std::abs(t);
  if (a <= BumpSpec::inner) return 1.0;
  if (a >= BumpSpec::outer) return 0.0;
  double up = h_ramp((BumpSpec::outer - a) / BumpSpec::inner);
  double down = h_ramp((a - BumpSpec::inner) / BumpSpec::inner);
  return up / (up + down);
}

double bump(double scale, std::span<const double> xi) {
  double prod = 1.0;
  for (double x : xi) {
    prod *= bump_ramp(scale * x);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

namespace {

// Power series J_nu(z) = (z/2)^nu sum_k (-1)^k (z^2/4)^k / (k! Gamma(nu+k+1)).
double bessel_series(double nu, double z) {
  double q = -0.25 * z * z;
  double term = std::pow(0.5 * z, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k <= 60; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// Hankel expansion: J_nu(z) ~ sqrt(2/(pi z)) [P cos w - Q sin w],
// w = z - nu pi/2 - pi/4, with a_m = prod_{j<=m}(mu-(2j-1)^2) / (m! (8z)^m),
// mu = 4 nu^2; P sums even m with alternating sign, Q odd m. Terminates
// exactly at half-integer nu; otherwise truncated at the smallest term.
double bessel_hankel(double nu, double z) {
  double mu = 4.0 * nu * nu;
  double w = z - nu * 0.5 * kPi - 0.25 * kPi;
  double p = 0.0, q = 0.0;
  double term = 1.0;
  double prev_mag = std::abs(term);
  for (int m = 0; m <= 40; ++m) {
    if (m > 0) {
      double num = mu - double(2 * m - 1) * (2 * m - 1);
      term *= num / (double(m) * 8.0 * z);
      if (num == 0.0) term = 0.0;
    }
    if (m > 2 && std::abs(term) > prev_mag) break;  // asymptotic floor
    prev_mag = std::abs(term) > 0 ? std::abs(term) : prev_mag;
    int phase = m / 2;  // pairs (P0,Q0,P1,Q1,...) alternate sign per pair
    double signed_term = (phase % 2 == 0) ? term : -term;
    if (m % 2 == 0)
      p += signed_term;
    else
      q += signed_term;
    if (term == 0.0) break;
  }
  return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(w) - q * std::sin(w));
}

}  // namespace

double bessel_j(double nu, double z) {
  if (z < 0.0 || nu < 0.0)
    throw std::invalid_argument("bessel_j: needs z >= 0, nu >= 0");
  if (z < 12.0) return bessel_series(nu, z);
  return bessel_hankel(nu, z);
}

double sphere_ft_radial(int d, double r) {
  if (d < 2) throw std::invalid_argument("sphere_ft_radial: d >= 2");
  if (r < 0.0) throw std::invalid_argument("sphere_ft_radial: r >= 0");
  const double nu = 0.5 * (d - 2);
  const double z = 2.0 * kPi * r;
  if (z < 12.0) {
    // normalized series Gamma(d/2) sum_k (-1)^k (pi r)^{2k} / (k! Gamma(k+d/2)),
    // no (pi r)^{-nu} prefactor so xi = 0 is exact
    double q = -(kPi * r) * (kPi * r);
    double term = 1.0;
    double sum = term;
    for (int k = 1; k <= 80; ++k) {
      term *= q / (k * (k + nu));
      sum += term;
      if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
  }
  return std::tgamma(0.5 * d) * std::pow(kPi * r, -nu) * bessel_hankel(nu, z);
}

double sphere_ft(int d, double lambda, std::span<const double> xi) {
  if (lambda <= 0.0) throw std::invalid_argument("sphere_ft: lambda > 0");
  double norm2 = 0.0;
  for (double x : xi) norm2 += x * x;
  return sphere_ft_radial(d, lambda * std::sqrt(norm2));
}

double sphere_ft_quadrature(int d, double r) {
  if (d < 2) throw std::invalid_argument("sphere_ft_quadrature: d >= 2");
  // ft(r) = int_0^pi cos(2 pi r cos t) sin^{d-2} t dt / int_0^pi sin^{d-2} t dt
  const int n = 20000;  // Simpson nodes; error ~ ((pi/n) 2 pi r)^4
  const double h = kPi / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = i * h;
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double s = std::pow(std::sin(t), d - 2);
    num += w * s * std::cos(2.0 * kPi * r * std::cos(t));
    den += w * s;
  }
  return num / den;
}

double stationary_phase_ratio(int d, double r) {
  if (r < 1.0)
    throw std::invalid_argument("stationary_phase_ratio: requires r >= 1");
  return std::abs(sphere_ft_radial(d, r)) * std::pow(r, 0.5 * (d - 1));
}

}  // namespace dsphere
