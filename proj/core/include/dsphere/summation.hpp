#pragma once
// Kahan compensated accumulation for the long exponential sums. Plain double
// summation loses ~sqrt(n) ulps on n-term sums; compensation keeps the error
// O(1) ulps, which matters for the 1e-8 imaginary-part checks on Kloosterman
// sums with q^d in the 1e8 range.

#include <complex>

namespace dsphere {

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

struct KahanComplex {
  KahanSum re, im;
  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace dsphere
