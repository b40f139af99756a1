#include "dsphere/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dsphere/arith.hpp"
#include "dsphere/averaging.hpp"
#include "dsphere/fft.hpp"
#include "dsphere/parallel.hpp"
#include "dsphere/summation.hpp"

namespace dsphere {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// l-scans run over multisets, so the cap is on C(q+d-1, d), not q^d.
constexpr double kSupScanCap = 2e7;
constexpr double kSplitCellCap = double(std::int64_t{1} << 26);

const SpherePointSet& resolve_sphere(int d, std::int64_t lambda2,
                                     const SpherePointSet* sphere,
                                     SpherePointSet& own) {
  if (sphere != nullptr) {
    if (sphere->d != d || sphere->lambda2 != lambda2)
      throw std::invalid_argument(
          "multiplier: sphere cache does not match (d, lambda^2)");
    return *sphere;
  }
  own = enumerate_sphere(d, lambda2);
  return own;
}

void check_xi(int d, std::int64_t lambda2, std::span<const double> xi) {
  if (d < 1) throw std::invalid_argument("multiplier: requires d >= 1");
  if (lambda2 < 1) throw std::invalid_argument("multiplier: requires lambda^2 >= 1");
  if (static_cast<int>(xi.size()) != d)
    throw std::invalid_argument("multiplier: xi has wrong dimension");
}

// Mass of the sphere measure entering the main term. The measure is
// lambda^{-(d-2)} times the Euclidean delta(|x|^2 - lambda^2), total mass
// pi^{d/2} / Gamma(d/2) independent of lambda; sphere_ft supplies the
// unit-mass transform, so the mass multiplies in here. This constant is
// what lets c_lambda cancel a_lambda: the lattice point count splits as
// mass * (sum of K over q) * lambda^{d-2} plus minor arcs.
double sphere_measure_mass(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

std::string format_xi(std::span<const double> xi) {
  std::string s = "xi=(";
  char buf[40];
  for (std::size_t i = 0; i < xi.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", xi[i]);
    if (i) s += ',';
    s += buf;
  }
  s += ')';
  return s;
}

std::string format_index(std::span<const std::int64_t> n) {
  std::string s = "n=(";
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(n[i]);
  }
  s += ')';
  return s;
}

// sup_{l in Z_q^d} |K(lambda, q, l)|, exact. K is invariant under coordinate
// permutations of l, so the scan walks non-decreasing tuples only.
double kloosterman_sup(int d, std::int64_t lambda2, std::int64_t q,
                       const GaussTable& table) {
  double combos = 1.0;
  for (int i = 1; i <= d; ++i) combos *= double(q - 1 + i) / double(i);
  if (combos > kSupScanCap)
    throw ResourceCapError("kloosterman_sup: l-scan budget exceeded");
  std::vector<std::int64_t> l(static_cast<std::size_t>(d), 0);
  double best = 0.0;
  for (;;) {
    const double v = std::fabs(kloosterman(lambda2, q, l, &table));
    if (v > best) best = v;
    int i = d - 1;
    while (i >= 0 && l[static_cast<std::size_t>(i)] == q - 1) --i;
    if (i < 0) break;
    const std::int64_t next = ++l[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) l[static_cast<std::size_t>(j)] = next;
  }
  return best;
}

}  // namespace

double a_multiplier(int d, std::int64_t lambda2, std::span<const double> xi,
                    const SpherePointSet* sphere) {
  check_xi(d, lambda2, xi);
  SpherePointSet own;
  const SpherePointSet& pts = resolve_sphere(d, lambda2, sphere, own);
  const std::int64_t lm = isqrt64(lambda2);
  const std::int64_t width = 2 * lm + 1;

  // e(xi_i c) for every coordinate value c the sphere can take; the per-point
  // phase is then a d-term product of table entries, no trig in the hot loop.
  std::vector<std::complex<double>> tab(static_cast<std::size_t>(d) * width);
  for (int i = 0; i < d; ++i)
    for (std::int64_t c = -lm; c <= lm; ++c)
      tab[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(c + lm)] =
          std::polar(1.0, kTwoPi * xi[static_cast<std::size_t>(i)] * double(c));

  KahanComplex acc;
  const std::size_t n = pts.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto p = pts.point(j);
    std::complex<double> z = tab[static_cast<std::size_t>(p[0] + lm)];
    for (int i = 1; i < d; ++i)
      z *= tab[static_cast<std::size_t>(i) * width +
               static_cast<std::size_t>(p[i] + lm)];
    acc.add(z);
  }
  const double w = std::pow(double(lambda2), -0.5 * (d - 2));
  const std::complex<double> v = acc.value();
  // n <-> -n makes the sum real; a residue here means a broken point set
  if (std::fabs(w * v.imag()) >= 1e-8)
    throw std::runtime_error("a_multiplier: imaginary part exceeds 1e-8");
  return w * v.real();
}

MainTermCache::MainTermCache(int d, std::int64_t lambda2, std::int64_t q_max)
    : d_(d), lambda2_(lambda2) {
  if (d < 1) throw std::invalid_argument("MainTermCache: requires d >= 1");
  if (lambda2 < 1)
    throw std::invalid_argument("MainTermCache: requires lambda^2 >= 1");
  q_max_ = q_max > 0 ? q_max : std::max<std::int64_t>(1, isqrt64(lambda2));
  tables_.reserve(static_cast<std::size_t>(q_max_));
  for (std::int64_t q = 1; q <= q_max_; ++q) tables_.emplace_back(q);
}

const GaussTable& MainTermCache::table(std::int64_t q) const {
  if (q < 1 || q > q_max_)
    throw std::invalid_argument("MainTermCache: q outside cached range");
  return tables_[static_cast<std::size_t>(q - 1)];
}

std::complex<double> c_term(int d, std::int64_t lambda2, std::int64_t q,
                            std::span<const double> xi, BumpSpec,
                            const MainTermCache* cache) {
  check_xi(d, lambda2, xi);
  if (q < 1) throw std::invalid_argument("c_term: requires q >= 1");
  if (cache != nullptr &&
      (cache->dim() != d || cache->lambda2() != lambda2))
    throw std::invalid_argument("c_term: cache does not match (d, lambda^2)");

  std::vector<double> delta(static_cast<std::size_t>(d));
  std::vector<std::int64_t> lmod(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const std::int64_t li = std::llround(double(q) * xi[static_cast<std::size_t>(i)]);
    delta[static_cast<std::size_t>(i)] =
        xi[static_cast<std::size_t>(i)] - double(li) / double(q);
    lmod[static_cast<std::size_t>(i)] = ((li % q) + q) % q;
  }
  const double phi = bump(double(q), delta);
  if (phi == 0.0) return {0.0, 0.0};

  double k;
  if (cache != nullptr && q <= cache->q_max()) {
    k = kloosterman(lambda2, q, lmod, &cache->table(q));
  } else {
    const GaussTable local(q);
    k = kloosterman(lambda2, q, lmod, &local);
  }
  const double ft =
      sphere_measure_mass(d) * sphere_ft(d, std::sqrt(double(lambda2)), delta);
  return {k * phi * ft, 0.0};
}

std::complex<double> c_main(int d, std::int64_t lambda2,
                            std::span<const double> xi, BumpSpec bump_spec,
                            const MainTermCache* cache, std::int64_t q_max) {
  check_xi(d, lambda2, xi);
  const std::int64_t top =
      q_max > 0 ? q_max : std::max<std::int64_t>(1, isqrt64(lambda2));
  KahanComplex acc;
  for (std::int64_t q = 1; q <= top; ++q)
    acc.add(c_term(d, lambda2, q, xi, bump_spec, cache));
  return acc.value();
}

std::complex<double> residual(int d, std::int64_t lambda2,
                              std::span<const double> xi, BumpSpec bump_spec,
                              const MainTermCache* cache,
                              const SpherePointSet* sphere) {
  const double a = a_multiplier(d, lambda2, xi, sphere);
  return std::complex<double>(a, 0.0) -
         c_main(d, lambda2, xi, bump_spec, cache);
}

NormCertificate residual_sup_estimate(const DecompositionParams& params) {
  const int d = params.d;
  const std::int64_t lambda2 = params.lambda2;
  if (d < 4)
    throw std::invalid_argument("residual_sup_estimate: requires d >= 4");
  if (lambda2 < 1)
    throw std::invalid_argument("residual_sup_estimate: requires lambda^2 >= 1");
  if (!admissible(d, lambda2))
    throw std::invalid_argument(
        "residual_sup_estimate: lambda^2 not admissible in this dimension");
  const std::int64_t lm = isqrt64(lambda2);

  std::vector<double> grid = params.xi_grid;
  if (!grid.empty() && grid.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument(
        "residual_sup_estimate: xi_grid size is not a multiple of d");
  const bool user_grid = !grid.empty();
  std::int64_t structured = 0;
  if (!user_grid) {
    // rational skeleton: around every l/q with q <= 2 lambda, step off by
    // 0, 1/(8q) (deep inside the bump), 1/(4q) (its edge), on the first-axis
    // and the diagonal rays; this brackets each main-term window
    auto push = [&](double head, double rest) {
      grid.push_back(head - std::floor(head));
      for (int i = 1; i < d; ++i) grid.push_back(rest - std::floor(rest));
    };
    for (std::int64_t q = 1; q <= 2 * lm; ++q) {
      const double offs[3] = {0.0, 1.0 / (8.0 * double(q)),
                              1.0 / (4.0 * double(q))};
      for (std::int64_t c = 0; c < q; ++c) {
        const double base = double(c) / double(q);
        for (const double t : offs) {
          push(base + t, 0.0);       // axis ray
          push(base + t, base + t);  // diagonal ray
        }
      }
    }
    structured = static_cast<std::int64_t>(grid.size()) / d;
    auto eng = seeded_engine({0x7e51dULL, static_cast<std::uint64_t>(d),
                              static_cast<std::uint64_t>(lambda2), params.seed});
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::int64_t i = 0; i < params.random_points; ++i)
      for (int k = 0; k < d; ++k) grid.push_back(unif(eng));
  }
  const std::size_t npts = grid.size() / static_cast<std::size_t>(d);
  if (npts == 0)
    throw std::invalid_argument("residual_sup_estimate: empty xi grid");

  const std::int64_t q_top = params.q_max > 0 ? params.q_max : lm;
  const MainTermCache cache(d, lambda2, q_top);
  const SpherePointSet sphere = enumerate_sphere(d, lambda2);
  const unsigned jobs =
      params.jobs > 0 ? static_cast<unsigned>(params.jobs) : default_jobs();

  const std::size_t nchunks = npts < kChunkGrid ? npts : kChunkGrid;
  std::vector<double> best(nchunks, -1.0);
  std::vector<std::size_t> arg(nchunks, 0);
  parallel_chunks(npts, jobs, [&](std::size_t c, std::size_t b, std::size_t e) {
    std::vector<double> xi(static_cast<std::size_t>(d));
    double bv = -1.0;
    std::size_t bi = b;
    for (std::size_t i = b; i < e; ++i) {
      std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(i * d), d,
                  xi.begin());
      const double a = a_multiplier(d, lambda2, xi, &sphere);
      const double v = std::abs(
          std::complex<double>(a, 0.0) -
          c_main(d, lambda2, xi, params.bump, &cache, q_top));
      if (v > bv) {
        bv = v;
        bi = i;
      }
    }
    best[c] = bv;
    arg[c] = bi;
  });
  double sup = -1.0;
  std::size_t argi = 0;
  for (std::size_t c = 0; c < nchunks; ++c)
    if (best[c] > sup) {
      sup = best[c];
      argi = arg[c];
    }

  NormCertificate cert;
  cert.name = "residual_sup_estimate";
  cert.params.d = d;
  cert.params.lambda2 = lambda2;
  cert.params.epsilon = params.epsilon;
  cert.params.seed = params.seed;
  cert.params.grid = static_cast<std::int64_t>(npts);
  const double right =
      std::pow(double(lambda2), 0.5 * (0.5 * (1.0 - d) + params.epsilon));
  cert.set_sides(sup, right);
  cert.witness = format_xi(
      std::span<const double>(grid.data() + argi * static_cast<std::size_t>(d),
                              static_cast<std::size_t>(d)));
  cert.extra = {{"structured_points", double(structured)},
                {"random_points", double(npts) - double(structured)},
                {"user_grid", user_grid ? 1.0 : 0.0}};
  return cert;
}

TorusMultiplier lift_multiplier(const TorusMultiplier& m, std::int64_t q,
                                std::int64_t lambda2) {
  const int d = m.d;
  const std::int64_t L = m.side;
  if (d < 1 || L < 1)
    throw std::invalid_argument("lift_multiplier: empty multiplier grid");
  if (lambda2 < 1)
    throw std::invalid_argument("lift_multiplier: requires lambda^2 >= 1");
  if (q < 1 || L % q != 0)
    throw std::invalid_argument("lift_multiplier: q must divide the torus side");
  double dcells = 1.0;
  for (int i = 0; i < d; ++i) dcells *= double(L);
  if (dcells > kSplitCellCap)
    throw ResourceCapError("lift_multiplier: cell budget exceeded");
  const std::size_t cells = static_cast<std::size_t>(std::llround(dcells));
  if (m.values.size() != cells)
    throw std::invalid_argument("lift_multiplier: values size != side^d");

  const std::int64_t step = L / q;
  const GaussTable table(q);
  const auto& units = table.units();

  // m_{lambda,q} = sum_a e_q(-a lambda^2) (x)_i [sum_l g1(a,l,q) shift_{l step}]
  // applied per coordinate: the d-dim l-sum factorizes through the 1-dim
  // Gauss sums, phi(q) d q L^d work instead of q^d L^d.
  TorusMultiplier out{d, L,
                      std::vector<std::complex<double>>(cells, {0.0, 0.0})};
  std::vector<std::complex<double>> tmp, next(cells);
  for (std::size_t ui = 0; ui < units.size(); ++ui) {
    tmp = m.values;
    std::int64_t inner = static_cast<std::int64_t>(cells) / L;
    for (int axis = 0; axis < d; ++axis) {
      std::fill(next.begin(), next.end(), std::complex<double>{0.0, 0.0});
      const std::int64_t outer = static_cast<std::int64_t>(cells) / (L * inner);
      for (std::int64_t l = 0; l < q; ++l) {
        const std::complex<double> g = table.value(ui, l);
        if (std::abs(g.real()) + std::abs(g.imag()) < 1e-14) continue;
        const std::int64_t shift = (l * step) % L;
        for (std::int64_t o = 0; o < outer; ++o) {
          const std::size_t base = static_cast<std::size_t>(o * L * inner);
          for (std::int64_t k = 0; k < L; ++k) {
            std::int64_t s = k - shift;
            if (s < 0) s += L;
            std::complex<double>* np = next.data() + base +
                                       static_cast<std::size_t>(k * inner);
            const std::complex<double>* tp =
                tmp.data() + base + static_cast<std::size_t>(s * inner);
            for (std::int64_t j = 0; j < inner; ++j) np[j] += g * tp[j];
          }
        }
      }
      tmp.swap(next);
      inner /= L;
      if (inner == 0) inner = 1;
    }
    const std::int64_t r = ((lambda2 % q) * (units[ui] % q)) % q;
    const std::complex<double> phase =
        std::polar(1.0, -kTwoPi * double(r) / double(q));
    for (std::size_t i = 0; i < cells; ++i) out.values[i] += phase * tmp[i];
  }
  return out;
}

NormCertificate ft_domination_check(const TorusMultiplier& m, std::int64_t q,
                                    std::int64_t lambda2) {
  const TorusMultiplier lifted = lift_multiplier(m, q, lambda2);
  const std::vector<std::int64_t> dims(static_cast<std::size_t>(m.d), m.side);
  std::vector<std::complex<double>> mh = m.values;
  std::vector<std::complex<double>> lh = lifted.values;
  fft::transform(mh, dims, true);  // multiplier grid -> kernel values
  fft::transform(lh, dims, true);

  double worst = -std::numeric_limits<double>::infinity();
  std::size_t argn = 0;
  for (std::size_t i = 0; i < mh.size(); ++i) {
    const double slack = std::abs(lh[i]) - double(q) * std::abs(mh[i]);
    if (slack > worst) {
      worst = slack;
      argn = i;
    }
  }
  std::vector<std::int64_t> n(static_cast<std::size_t>(m.d));
  std::size_t rem = argn;
  for (int i = m.d - 1; i >= 0; --i) {
    n[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(rem % static_cast<std::size_t>(m.side));
    rem /= static_cast<std::size_t>(m.side);
  }

  NormCertificate cert;
  cert.name = "ft_domination";
  cert.params.d = m.d;
  cert.params.lambda2 = lambda2;
  cert.params.grid = m.side;
  cert.set_sides(worst, 1e-10);
  cert.witness = format_index(n);
  cert.extra = {{"q", double(q)},
                {"max_kernel", std::abs(lh[argn])},
                {"base_kernel", std::abs(mh[argn])}};
  return cert;
}

ProofSplitResult proof_split_certificates(const DecompositionParams& params,
                                          const Box& f_support) {
  const int d = params.d;
  const std::int64_t lambda2 = params.lambda2;
  const std::int64_t N = params.cutoff_n;
  if (d < 4)
    throw std::invalid_argument("proof_split: requires d >= 4");
  if (lambda2 < 1)
    throw std::invalid_argument("proof_split: requires lambda^2 >= 1");
  if (!admissible(d, lambda2))
    throw std::invalid_argument(
        "proof_split: lambda^2 not admissible in this dimension");
  if (N < 1) throw std::invalid_argument("proof_split: requires cutoff N >= 1");
  const std::int64_t lm = isqrt64(lambda2);
  if (static_cast<int>(f_support.origin.size()) != d ||
      static_cast<int>(f_support.dims.size()) != d)
    throw std::invalid_argument("proof_split: f support has wrong dimension");
  std::int64_t fvol = 1;
  for (int i = 0; i < d; ++i) {
    const std::int64_t o = f_support.origin[static_cast<std::size_t>(i)];
    const std::int64_t w = f_support.dims[static_cast<std::size_t>(i)];
    if (w < 1) throw std::invalid_argument("proof_split: empty f support");
    if (o < 0 || o + w > lm + 1)
      throw std::invalid_argument(
          "proof_split: f support must lie inside [0, lambda]^d");
    fvol *= w;
  }
  const double fshare = double(fvol) / std::pow(double(lm + 1), d);
  const double lambda = std::sqrt(double(lambda2));

  ProofSplitResult result;
  auto stamp = [&](NormCertificate& c) {
    c.params.d = d;
    c.params.lambda2 = lambda2;
    c.params.cutoff_n = N;
    c.params.epsilon = params.epsilon;
    c.params.eta = params.eta;
  };

  if (N * N >= lambda2) {
    // N >= lambda: no splitting, the whole average sits in the first piece
    GridFunction f = make_box_grid(f_support.origin, f_support.dims);
    std::fill(f.values.begin(), f.values.end(), 1.0);
    const GridFunction af = convolve_sphere(f, lambda2, ConvMode::fft);
    double sup = 0.0;
    std::vector<std::int64_t> x(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> argx = x;
    for (;;) {
      const double v = std::fabs(af.at(x));
      if (v > sup) {
        sup = v;
        argx = x;
      }
      int i = d - 1;
      while (i >= 0 && ++x[static_cast<std::size_t>(i)] == lm + 1) {
        x[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
    NormCertificate cert;
    cert.name = "proof_split_m1";
    stamp(cert);
    cert.set_sides(sup, double(N) * double(N) * fshare);
    cert.witness = format_index(argx);
    cert.extra = {{"f_cells", double(fvol)}, {"f_share", fshare}};
    result.branch = "M1";
    result.certs.push_back(std::move(cert));
    return result;
  }

  const MainTermCache cache(d, lambda2, lm);
  const double sig = sigma(-0.5, static_cast<std::uint64_t>(lambda2));
  const double right2 =
      std::pow(double(N), 0.5 * (3.0 - d) + params.epsilon) * sig;

  // sup_l |K| per modulus, shared by the two multiplier-side pieces
  std::vector<double> supk(static_cast<std::size_t>(lm + 1), 0.0);
  for (std::int64_t q = 1; q <= lm; ++q)
    supk[static_cast<std::size_t>(q)] =
        kloosterman_sup(d, lambda2, q, cache.table(q));

  {  // large moduli N <= q <= lambda: triangle inequality over l
    KahanSum s, wm;
    for (std::int64_t q = N; q <= lm; ++q) {
      s.add(supk[static_cast<std::size_t>(q)]);
      wm.add(std::pow(double(q), 0.5 * (1.0 - d) + params.epsilon) *
             rho_weight(static_cast<std::uint64_t>(q),
                        static_cast<std::uint64_t>(lambda2)));
    }
    NormCertificate cert;
    cert.name = "proof_split_m22";
    stamp(cert);
    cert.set_sides(s.value(), right2);
    cert.witness = "q=" + std::to_string(N) + ".." + std::to_string(lm);
    cert.extra = {{"weil_majorant", wm.value()},
                  {"sigma_half", sig},
                  {"terms", double(lm - N + 1)}};
    result.certs.push_back(std::move(cert));
  }

  {  // small moduli, high frequencies: bump tail Phi(q.) - Phi(lambda q/N .)
    KahanSum s;
    const int steps = 64;
    for (std::int64_t q = 1; q <= N; ++q) {
      const double tlo = double(N) / (16.0 * lambda * double(q));
      const double thi = std::sqrt(double(d)) / (2.0 * double(q));
      double ring = 0.0;
      for (int si = 0; si <= steps; ++si) {
        const double t = tlo * std::pow(thi / tlo, double(si) / steps);
        for (int dir = 0; dir < 2; ++dir) {
          std::vector<double> delta(static_cast<std::size_t>(d), 0.0);
          if (dir == 0)
            delta[0] = t;
          else
            std::fill(delta.begin(), delta.end(), t / std::sqrt(double(d)));
          const double cut = bump(double(q), delta) -
                             bump(lambda * double(q) / double(N), delta);
          if (cut <= 0.0) continue;
          const double v = cut * sphere_measure_mass(d) *
                           std::fabs(sphere_ft(d, lambda, delta));
          if (v > ring) ring = v;
        }
      }
      s.add(supk[static_cast<std::size_t>(q)] * ring);
    }
    NormCertificate cert;
    cert.name = "proof_split_m23";
    stamp(cert);
    cert.set_sides(s.value(), right2);
    cert.witness = "q=1.." + std::to_string(N);
    cert.extra = {{"terms", double(N)}, {"delta_samples", double(2 * (steps + 1))}};
    result.certs.push_back(std::move(cert));
  }

  {  // kernel side: sum_q q * (unit-mass annulus average of f), sup over E.
    // All annuli combine into one kernel with per-shell weights, so the whole
    // piece costs three transforms. The torus is alias-free on E: for
    // x in E, n in the kernel, y in F, |x - n - y| <= lambda + reach < L.
    const double w2max = lambda / 2.0;
    const std::int64_t mhi_max = static_cast<std::int64_t>(
        std::floor((lambda + w2max) * (lambda + w2max) + 1e-9));
    const std::int64_t reach = isqrt64(mhi_max);
    const std::int64_t L = fft::good_size(lm + reach + 2);
    double dcells = 1.0;
    for (int i = 0; i < d; ++i) dcells *= double(L);
    if (dcells > kSplitCellCap)
      throw ResourceCapError("proof_split: annulus fft budget exceeded");
    const std::size_t cells = static_cast<std::size_t>(std::llround(dcells));

    std::int64_t mlo_min = mhi_max;
    std::vector<std::int64_t> mlo(static_cast<std::size_t>(N + 1), 0);
    std::vector<std::int64_t> mhi(static_cast<std::size_t>(N + 1), 0);
    for (std::int64_t q = 1; q <= N; ++q) {
      const double w2 = lambda * double(q) / (2.0 * double(N));
      mlo[static_cast<std::size_t>(q)] = std::max<std::int64_t>(
          0, static_cast<std::int64_t>(
                 std::ceil((lambda - w2) * (lambda - w2) - 1e-9)));
      mhi[static_cast<std::size_t>(q)] = static_cast<std::int64_t>(
          std::floor((lambda + w2) * (lambda + w2) + 1e-9));
      mlo_min = std::min(mlo_min, mlo[static_cast<std::size_t>(q)]);
    }

    // widest window once; per-shell weight sum_q [m in window_q] q / |ann_q|
    std::vector<SpherePointSet> shells;
    shells.reserve(static_cast<std::size_t>(mhi_max - mlo_min + 1));
    for (std::int64_t mm = mlo_min; mm <= mhi_max; ++mm)
      shells.push_back(enumerate_sphere(d, mm));
    std::vector<double> weight(shells.size(), 0.0);
    for (std::int64_t q = 1; q <= N; ++q) {
      std::uint64_t mass = 0;
      for (std::int64_t mm = mlo[static_cast<std::size_t>(q)];
           mm <= mhi[static_cast<std::size_t>(q)]; ++mm)
        mass += shells[static_cast<std::size_t>(mm - mlo_min)].size();
      if (mass == 0) continue;  // window always holds |n|^2 = lambda^2
      for (std::int64_t mm = mlo[static_cast<std::size_t>(q)];
           mm <= mhi[static_cast<std::size_t>(q)]; ++mm)
        weight[static_cast<std::size_t>(mm - mlo_min)] +=
            double(q) / double(mass);
    }

    const std::vector<std::int64_t> dims(static_cast<std::size_t>(d), L);
    std::vector<std::complex<double>> fhat(cells, {0.0, 0.0});
    {
      std::vector<std::int64_t> x = f_support.origin;
      for (;;) {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i)
          idx = idx * static_cast<std::size_t>(L) +
                static_cast<std::size_t>(x[static_cast<std::size_t>(i)]);
        fhat[idx] = 1.0;
        int i = d - 1;
        while (i >= 0 &&
               ++x[static_cast<std::size_t>(i)] ==
                   f_support.origin[static_cast<std::size_t>(i)] +
                       f_support.dims[static_cast<std::size_t>(i)]) {
          x[static_cast<std::size_t>(i)] =
              f_support.origin[static_cast<std::size_t>(i)];
          --i;
        }
        if (i < 0) break;
      }
      fft::transform(fhat, dims, false);
    }

    std::vector<std::complex<double>> ker(cells, {0.0, 0.0});
    for (std::size_t sh = 0; sh < shells.size(); ++sh) {
      if (weight[sh] == 0.0) continue;
      const SpherePointSet& pts = shells[sh];
      const std::size_t n = pts.size();
      for (std::size_t j = 0; j < n; ++j) {
        const auto p = pts.point(j);
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i) {
          std::int64_t c = p[i] % L;
          if (c < 0) c += L;
          idx = idx * static_cast<std::size_t>(L) + static_cast<std::size_t>(c);
        }
        ker[idx] += weight[sh];
      }
    }
    fft::transform(ker, dims, false);
    for (std::size_t i = 0; i < cells; ++i) ker[i] *= fhat[i];
    fft::transform(ker, dims, true);

    double sup = 0.0;
    std::vector<std::int64_t> x(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> argx = x;
    for (;;) {
      std::size_t idx = 0;
      for (int i = 0; i < d; ++i)
        idx = idx * static_cast<std::size_t>(L) +
              static_cast<std::size_t>(x[static_cast<std::size_t>(i)]);
      const double v = ker[idx].real();
      if (v > sup) {
        sup = v;
        argx = x;
      }
      int i = d - 1;
      while (i >= 0 && ++x[static_cast<std::size_t>(i)] == lm + 1) {
        x[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
    NormCertificate cert;
    cert.name = "proof_split_m12";
    stamp(cert);
    cert.set_sides(sup, double(N) * double(N) * fshare);
    cert.witness = format_index(argx);
    cert.extra = {{"torus_side", double(L)},
                  {"reach", double(reach)},
                  {"f_share", fshare}};
    result.certs.push_back(std::move(cert));
  }

  result.branch = "M2";
  return result;
}

}  // namespace dsphere
