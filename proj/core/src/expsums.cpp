#include "dsphere/expsums.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dsphere/arith.hpp"
#include "dsphere/summation.hpp"

namespace dsphere {

namespace {

constexpr double kImTol = 1e-8;

std::atomic<double> g_root_fault{0.0};

template <class Real>
std::vector<std::complex<Real>> roots_of_unity(std::int64_t q) {
  const Real two_pi = Real(2) * std::acos(Real(-1));
  const Real fault = static_cast<Real>(g_root_fault.load());
  std::vector<std::complex<Real>> roots(q);
  for (std::int64_t k = 0; k < q; ++k) {
    Real ang = two_pi * Real(k) / Real(q);
    roots[k] = std::complex<Real>(std::cos(ang) + fault * Real(k) / Real(q),
                                  std::sin(ang));
  }
  return roots;
}

inline std::int64_t mod_reduce(std::int64_t x, std::int64_t q) {
  std::int64_t r = x % q;
  return r < 0 ? r + q : r;
}

template <class Real>
std::complex<Real> gauss_sum_1d_impl(
    std::int64_t a, std::int64_t l, std::int64_t q,
    const std::vector<std::complex<Real>>& roots) {
  a = mod_reduce(a, q);
  l = mod_reduce(l, q);
  std::complex<Real> acc{0, 0};
  Real comp_re = 0, comp_im = 0;  // Kahan
  for (std::int64_t n = 0; n < q; ++n) {
    std::int64_t idx = (a * ((n * n) % q) + n * l) % q;
    const std::complex<Real>& z = roots[idx];
    Real yr = z.real() - comp_re, yi = z.imag() - comp_im;
    Real tr = acc.real() + yr, ti = acc.imag() + yi;
    comp_re = (tr - acc.real()) - yr;
    comp_im = (ti - acc.imag()) - yi;
    acc = {tr, ti};
  }
  return acc / Real(q);
}

// Full factored K in the requested precision; rebuilds 1-D sums on the fly.
template <class Real>
std::complex<Real> kloosterman_impl(std::int64_t lambda2, std::int64_t q,
                                    std::span<const std::int64_t> l) {
  auto roots = roots_of_unity<Real>(q);
  const std::int64_t m = mod_reduce(lambda2, q);
  std::complex<Real> total{0, 0};
  for (std::int64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    std::complex<Real> prod = roots[mod_reduce(-a * m, q)];
    for (std::int64_t li : l)
      prod *= gauss_sum_1d_impl<Real>(a, mod_reduce(li, q), q, roots);
    total += prod;
  }
  if (q == 1) return {1, 0};
  return total;
}

}  // namespace

std::vector<std::complex<double>> unit_roots(std::int64_t q) {
  if (q < 1) throw std::invalid_argument("unit_roots: q >= 1");
  return roots_of_unity<double>(q);
}

void inject_unit_root_fault(double eps) { g_root_fault.store(eps); }
double unit_root_fault() { return g_root_fault.load(); }

std::vector<std::int64_t> units_mod(std::int64_t q) {
  if (q < 1) throw std::invalid_argument("units_mod: q >= 1");
  std::vector<std::int64_t> units;
  for (std::int64_t a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) units.push_back(a);
  if (q == 1) units = {0};  // trivial group convention
  return units;
}

std::complex<double> gauss_sum_1d(std::int64_t a, std::int64_t l,
                                  std::int64_t q) {
  if (q < 1) throw std::invalid_argument("gauss_sum_1d: q >= 1");
  auto roots = roots_of_unity<double>(q);
  return gauss_sum_1d_impl<double>(a, l, q, roots);
}

std::complex<double> gauss_sum(std::int64_t a, std::int64_t q,
                               std::span<const std::int64_t> l) {
  auto roots = roots_of_unity<double>(q);
  std::complex<double> prod{1, 0};
  for (std::int64_t li : l)
    prod *= gauss_sum_1d_impl<double>(a, li, q, roots);
  return prod;
}

GaussTable::GaussTable(std::int64_t q) : q_(q) {
  if (q < 1) throw std::invalid_argument("GaussTable: q >= 1");
  units_ = units_mod(q);
  auto roots = roots_of_unity<double>(q);
  rows_.resize(units_.size() * q);
  for (std::size_t i = 0; i < units_.size(); ++i)
    for (std::int64_t l = 0; l < q; ++l)
      rows_[i * q + l] = gauss_sum_1d_impl<double>(units_[i], l, q, roots);
}

double kloosterman(std::int64_t lambda2, std::int64_t q,
                   std::span<const std::int64_t> l, const GaussTable* table) {
  if (q < 1) throw std::invalid_argument("kloosterman: q >= 1");
  if (q == 1) return 1.0;

  std::complex<double> total;
  if (table != nullptr && table->q() == q) {
    auto roots = roots_of_unity<double>(q);
    const std::int64_t m = mod_reduce(lambda2, q);
    KahanComplex acc;
    const auto& units = table->units();
    for (std::size_t i = 0; i < units.size(); ++i) {
      std::complex<double> prod = roots[mod_reduce(-units[i] * m, q)];
      for (std::int64_t li : l) prod *= table->value(i, mod_reduce(li, q));
      acc.add(prod);
    }
    total = acc.value();
  } else {
    total = kloosterman_impl<double>(lambda2, q, l);
  }
  if (std::abs(total.imag()) >= kImTol) {
    // precision-loss path: retry the whole sum in extended precision
    std::complex<long double> retry = kloosterman_impl<long double>(lambda2, q, l);
    if (std::abs(retry.imag()) >= kImTol)
      throw std::runtime_error(
          "kloosterman: imaginary part " +
          std::to_string(static_cast<double>(retry.imag())) +
          " exceeds tolerance after extended-precision retry");
    return static_cast<double>(retry.real());
  }
  return total.real();
}

std::complex<double> kloosterman_direct(std::int64_t lambda2, std::int64_t q,
                                        std::span<const std::int64_t> l,
                                        int d) {
  if (q < 1 || d < 1)
    throw std::invalid_argument("kloosterman_direct: q >= 1, d >= 1");
  if (static_cast<std::size_t>(l.size()) != static_cast<std::size_t>(d))
    throw std::invalid_argument("kloosterman_direct: l must have d entries");
  double cost = std::pow(double(q), d);
  if (cost > 1e8)
    throw std::invalid_argument("kloosterman_direct: q^d exceeds 1e8 cap");
  if (q == 1) return {1, 0};

  // Visit every n in Z_q^d once, binning by (|n|^2 mod q, n.l mod q); the
  // phase for each a is then read off the bins. Exact regrouping of the
  // literal sum, no Gauss factorization involved.
  std::vector<std::int64_t> lred(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) lred[i] = mod_reduce(l[i], q);
  std::vector<std::uint64_t> bins(static_cast<std::size_t>(q) * q, 0);
  std::vector<std::int64_t> n(d, 0);
  std::int64_t norm_mod = 0, dot_mod = 0;
  for (;;) {
    bins[static_cast<std::size_t>(norm_mod) * q + dot_mod] += 1;
    int i = d - 1;
    for (; i >= 0; --i) {
      std::int64_t v = n[i];
      if (v + 1 < q) {
        n[i] = v + 1;
        norm_mod = mod_reduce(norm_mod + 2 * v + 1, q);
        dot_mod = mod_reduce(dot_mod + lred[i], q);
        break;
      }
      // wrap v = q-1 -> 0: subtract v^2 and v*l_i
      n[i] = 0;
      norm_mod = mod_reduce(norm_mod - (v * v) % q, q);
      dot_mod = mod_reduce(dot_mod - (v * lred[i]) % q, q);
    }
    if (i < 0) break;
  }

  auto roots = roots_of_unity<double>(q);
  const std::int64_t m = mod_reduce(lambda2, q);
  KahanComplex acc;
  for (std::int64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    for (std::int64_t u = 0; u < q; ++u) {
      std::int64_t base = mod_reduce(a * (u - m), q);
      for (std::int64_t v = 0; v < q; ++v) {
        std::uint64_t c = bins[static_cast<std::size_t>(u) * q + v];
        if (c == 0) continue;
        acc.add(double(c) * roots[mod_reduce(base + v, q)]);
      }
    }
  }
  return acc.value() / cost;
}

namespace {

// h(a, y) = sum_l g1(a,l,q) e_q(y l) for one coordinate.
std::complex<double> completion_factor(const GaussTable& table,
                                       std::size_t unit_index, std::int64_t y,
                                       const std::vector<std::complex<double>>& roots,
                                       std::int64_t q) {
  KahanComplex acc;
  for (std::int64_t l = 0; l < q; ++l)
    acc.add(table.value(unit_index, l) * roots[mod_reduce(y * l, q)]);
  return acc.value();
}

}  // namespace

double completion_check(std::int64_t a, std::int64_t q,
                        std::span<const std::int64_t> y) {
  if (q < 1) throw std::invalid_argument("completion_check: q >= 1");
  if (std::gcd(mod_reduce(a, q), q) != 1 && q > 1)
    throw std::invalid_argument("completion_check: gcd(a,q) must be 1");
  if (q == 1) return 0.0;
  GaussTable table(q);
  auto roots = roots_of_unity<double>(q);
  std::size_t ai = 0;
  while (table.units()[ai] != mod_reduce(a, q)) ++ai;
  std::complex<double> lhs{1, 0};
  std::int64_t norm = 0;
  for (std::int64_t yi : y) {
    lhs *= completion_factor(table, ai, mod_reduce(yi, q), roots, q);
    norm = mod_reduce(norm + yi * yi, q);
  }
  std::complex<double> rhs = roots[mod_reduce(mod_reduce(a, q) * norm, q)];
  return std::abs(lhs - rhs);
}

double completion_check_literal(std::int64_t a, std::int64_t q,
                                std::span<const std::int64_t> y) {
  const int d = static_cast<int>(y.size());
  if (std::pow(double(q), d) > 1e6)
    throw std::invalid_argument("completion_check_literal: q^d exceeds 1e6");
  if (q == 1) return 0.0;
  auto roots = roots_of_unity<double>(q);
  GaussTable table(q);
  std::size_t ai = 0;
  while (table.units()[ai] != mod_reduce(a, q)) ++ai;

  std::vector<std::int64_t> l(d, 0);
  KahanComplex acc;
  for (;;) {
    std::complex<double> term{1, 0};
    std::int64_t dot = 0;
    for (int i = 0; i < d; ++i) {
      term *= table.value(ai, l[i]);
      dot = mod_reduce(dot + y[i] * l[i], q);
    }
    acc.add(term * roots[dot]);
    int i = d - 1;
    while (i >= 0 && l[i] == q - 1) l[i--] = 0;
    if (i < 0) break;
    ++l[i];
  }
  std::int64_t norm = 0;
  for (std::int64_t yi : y) norm = mod_reduce(norm + yi * yi, q);
  return std::abs(acc.value() - roots[mod_reduce(mod_reduce(a, q) * norm, q)]);
}

double completion_max_residual(std::int64_t q, int d) {
  if (q < 1 || d < 1)
    throw std::invalid_argument("completion_max_residual: q >= 1, d >= 1");
  if (q == 1) return 0.0;
  GaussTable table(q);
  auto roots = roots_of_unity<double>(q);
  const auto& units = table.units();
  // H[a][y] per coordinate
  std::vector<std::complex<double>> H(units.size() * q);
  for (std::size_t i = 0; i < units.size(); ++i)
    for (std::int64_t y = 0; y < q; ++y)
      H[i * q + y] = completion_factor(table, i, y, roots, q);

  double worst = 0.0;
  std::vector<std::int64_t> y(d, 0);
  for (;;) {
    std::int64_t norm = 0;
    for (int i = 0; i < d; ++i) norm = mod_reduce(norm + y[i] * y[i], q);
    for (std::size_t i = 0; i < units.size(); ++i) {
      std::complex<double> lhs{1, 0};
      for (int k = 0; k < d; ++k) lhs *= H[i * q + y[k]];
      double res =
          std::abs(lhs - roots[mod_reduce(units[i] * norm, q)]);
      if (res > worst) worst = res;
    }
    int i = d - 1;
    while (i >= 0 && y[i] == q - 1) y[i--] = 0;
    if (i < 0) break;
    ++y[i];
  }
  return worst;
}

NormCertificate weil_ratio(std::int64_t lambda2, std::int64_t q, int d,
                           double eta, const GaussTable* table,
                           std::uint64_t seed) {
  if (q < 1 || d < 1 || lambda2 < 1)
    throw std::invalid_argument("weil_ratio: positive q, d, lambda2");
  GaussTable local(1);
  if (table == nullptr || table->q() != q) {
    local = GaussTable(q);
    table = &local;
  }

  double best = -1.0;
  std::vector<std::int64_t> best_l;
  std::vector<std::int64_t> l(d, 0);
  auto consider = [&](const std::vector<std::int64_t>& cand) {
    double k = std::abs(kloosterman(lambda2, q, cand, table));
    if (k > best) {
      best = k;
      best_l = cand;
    }
  };
  std::int64_t n_l = 0;
  if (q <= 8) {
    for (;;) {
      consider(l);
      ++n_l;
      int i = d - 1;
      while (i >= 0 && l[i] == q - 1) l[i--] = 0;
      if (i < 0) break;
      ++l[i];
    }
  } else {
    auto rng = seeded_engine({static_cast<std::uint64_t>(d),
                              static_cast<std::uint64_t>(q),
                              static_cast<std::uint64_t>(lambda2), seed});
    std::uniform_int_distribution<std::int64_t> dist(0, q - 1);
    for (int rep = 0; rep < 64; ++rep) {
      for (auto& li : l) li = dist(rng);
      consider(l);
      ++n_l;
    }
  }

  NormCertificate cert;
  cert.name = "weil_ratio";
  cert.params.d = d;
  cert.params.lambda2 = lambda2;
  cert.params.eta = eta;
  cert.params.seed = seed;
  double rho_val = rho_weight(q, lambda2);
  cert.set_sides(best, std::pow(double(q), -0.5 * (d - 3) + eta) * rho_val);
  std::string w = "q=" + std::to_string(q) + " argmax l=(";
  for (std::size_t i = 0; i < best_l.size(); ++i)
    w += (i ? "," : "") + std::to_string(best_l[i]);
  cert.witness = w + ") over " + std::to_string(n_l) + " samples";
  cert.extra.emplace_back("q", double(q));
  cert.extra.emplace_back("rho", rho_val);
  return cert;
}

}  // namespace dsphere
