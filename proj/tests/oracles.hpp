#pragma once
// Reference implementations used only by tests. Everything here is the
// slowest, most literal reading of the definitions, kept independent of the
// library code paths it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

inline std::vector<std::pair<std::uint64_t, int>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<std::uint64_t> divisor_scan(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double sigma_scan(double b, std::uint64_t n) {
  double s = 0;
  for (std::uint64_t d : divisor_scan(n)) s += std::pow(double(d), b);
  return s;
}

// rho via repeated halving, no bit tricks shared with the library.
inline double rho_naive(std::uint64_t q, std::uint64_t lambda2) {
  int r = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++r;
  }
  std::uint64_t t = std::gcd(q, lambda2);
  return std::sqrt(double(t) * std::pow(2.0, r));
}

// e(x) = exp(2 pi i x)
inline std::complex<double> e2pi(double x) {
  return std::polar(1.0, 2.0 * std::acos(-1.0) * x);
}

}  // namespace oracle
