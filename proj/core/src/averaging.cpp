#include "dsphere/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "dsphere/fft.hpp"
#include "dsphere/summation.hpp"

namespace dsphere {
namespace {

// cap on torus cells for fft-mode work buffers (~1 GB per complex array)
constexpr std::int64_t kFftCellCap = std::int64_t{1} << 26;

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

double sphere_weight(int d, std::int64_t lambda2) {
  return std::pow(static_cast<double>(lambda2), -0.5 * (d - 2));
}

void check_lambda2(std::int64_t lambda2) {
  if (lambda2 < 1) throw std::invalid_argument("lambda^2 must be >= 1");
}

// admissibility gate shared by the operator entry points: throws unless
// overridden, warns when overridden on an inadmissible pair
void gate_admissible(int d, std::int64_t lambda2, bool allow) {
  if (!allow) {
    if (!admissible(d, lambda2))
      throw std::invalid_argument("inadmissible (d, lambda^2); pass the override to force");
    return;
  }
  bool ok = false;
  try {
    ok = admissible(d, lambda2);
  } catch (const std::invalid_argument&) {
  }
  if (!ok)
    std::fprintf(stderr, "warning: averaging over inadmissible d=%d lambda^2=%lld\n",
                 d, static_cast<long long>(lambda2));
}

const SpherePointSet& resolve_sphere(int d, std::int64_t lambda2,
                                     const SpherePointSet* sphere,
                                     SpherePointSet& storage) {
  if (sphere != nullptr) {
    if (sphere->d != d || sphere->lambda2 != lambda2)
      throw std::invalid_argument("sphere point set does not match (d, lambda^2)");
    return *sphere;
  }
  storage = enumerate_sphere(d, lambda2);
  return storage;
}

std::vector<std::size_t> row_major_strides(std::span<const std::int64_t> dims) {
  std::vector<std::size_t> s(dims.size());
  std::size_t acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    s[k] = acc;
    acc *= static_cast<std::size_t>(dims[k]);
  }
  return s;
}

// torus cell of an absolute point
std::size_t torus_index(std::span<const std::int64_t> x, std::int64_t L, int d) {
  std::size_t idx = 0;
  for (int k = 0; k < d; ++k)
    idx = idx * static_cast<std::size_t>(L) + static_cast<std::size_t>(floor_mod(x[k], L));
  return idx;
}

GridFunction convolve_direct(const GridFunction& f, const SpherePointSet& S,
                             double w) {
  int d = f.d;
  std::int64_t lm = isqrt64(S.lambda2);
  if (f.periodic) {
    GridFunction out = make_torus_grid(d, f.dims[0]);
    std::int64_t L = f.dims[0];
    std::vector<std::int64_t> x(d), y(d);
    for (int k = 0; k < d; ++k) x[k] = 0;
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
      double v = f.values[idx];
      if (v != 0.0) {
        double wv = w * v;
        for (std::size_t j = 0; j < S.size(); ++j) {
          auto n = S.point(j);
          for (int k = 0; k < d; ++k) y[k] = x[k] + n[k];
          out.values[torus_index(y, L, d)] += wv;
        }
      }
      for (int k = d - 1; k >= 0; --k) {
        if (++x[k] < f.dims[k]) break;
        x[k] = 0;
      }
    }
    return out;
  }
  std::vector<std::int64_t> origin(d), dims(d);
  for (int k = 0; k < d; ++k) {
    origin[k] = f.origin[k] - lm;
    dims[k] = f.dims[k] + 2 * lm;
  }
  GridFunction out = make_box_grid(std::move(origin), std::move(dims));
  auto stride = row_major_strides(out.dims);
  // sphere points as linearized offsets in the output box
  std::vector<std::ptrdiff_t> off(S.size());
  for (std::size_t j = 0; j < S.size(); ++j) {
    auto n = S.point(j);
    std::ptrdiff_t o = 0;
    for (int k = 0; k < d; ++k) o += static_cast<std::ptrdiff_t>(n[k]) * static_cast<std::ptrdiff_t>(stride[k]);
    off[j] = o;
  }
  std::size_t base = 0;  // output index of the current f cell
  for (int k = 0; k < d; ++k) base += static_cast<std::size_t>(lm) * stride[k];
  std::vector<std::int64_t> p(d, 0);
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    double v = f.values[idx];
    if (v != 0.0) {
      double wv = w * v;
      for (std::ptrdiff_t o : off)
        out.values[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) + o)] += wv;
    }
    for (int k = d - 1; k >= 0; --k) {
      base += stride[k];
      if (++p[k] < f.dims[k]) break;
      base -= stride[k] * static_cast<std::size_t>(f.dims[k]);
      p[k] = 0;
    }
  }
  return out;
}

std::int64_t fft_side(const GridFunction& f, std::int64_t lm,
                      std::int64_t torus_side) {
  if (f.periodic) {
    if (torus_side != 0 && torus_side != f.dims[0])
      throw std::invalid_argument("fft on a torus input uses its own side");
    return f.dims[0];
  }
  std::int64_t support = *std::max_element(f.dims.begin(), f.dims.end());
  std::int64_t need = support + 2 * lm + 1;
  std::int64_t L = torus_side == 0 ? fft::good_size(need) : torus_side;
  if (L < need)
    throw std::invalid_argument("fft torus side " + std::to_string(L) +
                                " wraps around; need >= " + std::to_string(need));
  return L;
}

void check_fft_cells(int d, std::int64_t L) {
  double cells = std::pow(static_cast<double>(L), d);
  if (cells > static_cast<double>(kFftCellCap))
    throw ResourceCapError("fft torus exceeds the cell budget");
}

// embeds f at its absolute coordinates mod L
std::vector<std::complex<double>> embed(const GridFunction& f, std::int64_t L,
                                        std::size_t cells) {
  std::vector<std::complex<double>> data(cells);
  std::vector<std::int64_t> x(f.origin.begin(), f.origin.end());
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    if (f.values[idx] != 0.0) data[torus_index(x, L, f.d)] += f.values[idx];
    for (int k = f.d - 1; k >= 0; --k) {
      if (++x[k] < f.origin[k] + f.dims[k]) break;
      x[k] = f.origin[k];
    }
  }
  return data;
}

void embed_second(std::vector<std::complex<double>>& data,
                  const GridFunction& f, std::int64_t L) {
  std::vector<std::int64_t> x(f.origin.begin(), f.origin.end());
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    if (f.values[idx] != 0.0)
      data[torus_index(x, L, f.d)] += std::complex<double>(0.0, f.values[idx]);
    for (int k = f.d - 1; k >= 0; --k) {
      if (++x[k] < f.origin[k] + f.dims[k]) break;
      x[k] = f.origin[k];
    }
  }
}

std::vector<std::complex<double>> kernel_hat(const SpherePointSet& S,
                                             std::int64_t L, int d,
                                             std::size_t cells,
                                             std::span<const std::int64_t> dims) {
  std::vector<std::complex<double>> kern(cells);
  std::vector<std::int64_t> n64(d);
  for (std::size_t j = 0; j < S.size(); ++j) {
    auto n = S.point(j);
    for (int k = 0; k < d; ++k) n64[k] = n[k];
    kern[torus_index(n64, L, d)] += 1.0;
  }
  fft::transform(kern, dims, false);
  return kern;
}

}  // namespace

ConvMode parse_conv_mode(const std::string& s) {
  if (s == "direct") return ConvMode::direct;
  if (s == "fft") return ConvMode::fft;
  throw std::invalid_argument("unknown convolution mode: " + s);
}

GridFunction convolve_sphere(const GridFunction& f, std::int64_t lambda2,
                             ConvMode mode, std::int64_t torus_side,
                             bool allow_inadmissible,
                             const SpherePointSet* sphere) {
  check_lambda2(lambda2);
  gate_admissible(f.d, lambda2, allow_inadmissible);
  SpherePointSet storage;
  const SpherePointSet& S = resolve_sphere(f.d, lambda2, sphere, storage);
  double w = sphere_weight(f.d, lambda2);
  if (mode == ConvMode::direct) {
    if (torus_side != 0)
      throw std::invalid_argument("torus_side applies to fft mode only");
    return convolve_direct(f, S, w);
  }
  std::int64_t lm = isqrt64(lambda2);
  std::int64_t L = fft_side(f, lm, torus_side);
  check_fft_cells(f.d, L);
  std::vector<std::int64_t> dims(f.d, L);
  std::size_t cells = 1;
  for (int k = 0; k < f.d; ++k) cells *= static_cast<std::size_t>(L);
  auto data = embed(f, L, cells);
  fft::transform(data, dims, false);
  auto khat = kernel_hat(S, L, f.d, cells, dims);
  for (std::size_t i = 0; i < cells; ++i) data[i] *= khat[i];
  fft::transform(data, dims, true);
  GridFunction out = make_torus_grid(f.d, L);
  for (std::size_t i = 0; i < cells; ++i) out.values[i] = w * data[i].real();
  return out;
}

std::vector<GridFunction> convolve_sphere_batch(
    std::span<const GridFunction> fs, std::int64_t lambda2,
    std::int64_t torus_side, bool allow_inadmissible,
    const SpherePointSet* sphere) {
  if (fs.empty()) return {};
  const GridFunction& f0 = fs[0];
  for (const GridFunction& f : fs)
    if (f.d != f0.d || f.origin != f0.origin || f.dims != f0.dims ||
        f.periodic != f0.periodic)
      throw std::invalid_argument("batch inputs must share one box");
  check_lambda2(lambda2);
  gate_admissible(f0.d, lambda2, allow_inadmissible);
  SpherePointSet storage;
  const SpherePointSet& S = resolve_sphere(f0.d, lambda2, sphere, storage);
  double w = sphere_weight(f0.d, lambda2);
  std::int64_t lm = isqrt64(lambda2);
  std::int64_t L = fft_side(f0, lm, torus_side);
  check_fft_cells(f0.d, L);
  std::vector<std::int64_t> dims(f0.d, L);
  std::size_t cells = 1;
  for (int k = 0; k < f0.d; ++k) cells *= static_cast<std::size_t>(L);
  auto khat = kernel_hat(S, L, f0.d, cells, dims);
  std::vector<GridFunction> out;
  out.reserve(fs.size());
  for (std::size_t i = 0; i < fs.size(); i += 2) {
    bool paired = i + 1 < fs.size();
    auto data = embed(fs[i], L, cells);
    if (paired) embed_second(data, fs[i + 1], L);
    fft::transform(data, dims, false);
    for (std::size_t j = 0; j < cells; ++j) data[j] *= khat[j];
    fft::transform(data, dims, true);
    GridFunction ga = make_torus_grid(f0.d, L);
    for (std::size_t j = 0; j < cells; ++j) ga.values[j] = w * data[j].real();
    out.push_back(std::move(ga));
    if (paired) {
      GridFunction gb = make_torus_grid(f0.d, L);
      for (std::size_t j = 0; j < cells; ++j) gb.values[j] = w * data[j].imag();
      out.push_back(std::move(gb));
    }
  }
  return out;
}

double local_norm(const GridFunction& f, const Box& Q, double p) {
  if (Q.origin.size() != static_cast<std::size_t>(f.d) ||
      Q.dims.size() != static_cast<std::size_t>(f.d))
    throw std::invalid_argument("local_norm: box dimension mismatch");
  for (std::int64_t s : Q.dims)
    if (s <= 0) throw std::invalid_argument("local_norm: empty box");
  bool sup = std::isinf(p);
  if (!sup && !(p > 0.0)) throw std::invalid_argument("local_norm: p must be positive");
  std::vector<std::int64_t> x(Q.origin);
  std::int64_t vol = Q.volume();
  KahanSum acc;
  double best = 0.0;
  for (std::int64_t i = 0; i < vol; ++i) {
    double v = std::fabs(f.at(x));
    if (sup)
      best = std::max(best, v);
    else if (v != 0.0)
      acc.add(std::pow(v, p));
    for (int k = f.d - 1; k >= 0; --k) {
      if (++x[k] < Q.origin[k] + Q.dims[k]) break;
      x[k] = Q.origin[k];
    }
  }
  if (sup) return best;
  return std::pow(acc.value() / static_cast<double>(vol), 1.0 / p);
}

double bilinear_form(const GridFunction& f, const GridFunction& g,
                     std::int64_t lambda2, const SpherePointSet* sphere) {
  if (f.d != g.d) throw std::invalid_argument("bilinear_form: dimension mismatch");
  check_lambda2(lambda2);
  SpherePointSet storage;
  const SpherePointSet& S = resolve_sphere(f.d, lambda2, sphere, storage);
  double w = sphere_weight(f.d, lambda2);
  std::vector<std::int64_t> x(g.origin), y(g.origin.begin(), g.origin.end());
  KahanSum acc;
  for (std::size_t idx = 0; idx < g.values.size(); ++idx) {
    double gv = g.values[idx];
    if (gv != 0.0) {
      KahanSum inner;
      for (std::size_t j = 0; j < S.size(); ++j) {
        auto n = S.point(j);
        for (int k = 0; k < g.d; ++k) y[k] = x[k] - n[k];
        double fv = f.at(y);
        if (fv != 0.0) inner.add(fv);
      }
      acc.add(w * inner.value() * gv);
    }
    for (int k = g.d - 1; k >= 0; --k) {
      if (++x[k] < g.origin[k] + g.dims[k]) break;
      x[k] = g.origin[k];
    }
  }
  return acc.value();
}

double set_bilinear_form(const LatticeSet& F, const LatticeSet& G,
                         std::int64_t lambda2, const SpherePointSet* sphere) {
  if (F.d != G.d) throw std::invalid_argument("set dimension mismatch");
  check_lambda2(lambda2);
  SpherePointSet storage;
  const SpherePointSet& S = resolve_sphere(F.d, lambda2, sphere, storage);
  if (F.size() == 0 || G.size() == 0) return 0.0;
  // <A 1_F, 1_G> counts pairs (y, n) with y in G, y - n in F; by n -> -n
  // symmetry of the sphere the roles of F and G can be swapped, so walk
  // the smaller set against a bitmap of the larger.
  const LatticeSet& walk = F.size() <= G.size() ? F : G;
  const LatticeSet& mark = F.size() <= G.size() ? G : F;
  Box bb = bounding_box(mark);
  std::int64_t vol = 1;
  for (std::int64_t s : bb.dims) {
    if (vol > (std::int64_t{1} << 31) / s)
      throw ResourceCapError("set bilinear form: bitmap budget exceeded");
    vol *= s;
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(vol), 0);
  auto stride = row_major_strides(bb.dims);
  int d = F.d;
  for (std::size_t i = 0; i < mark.size(); ++i) {
    auto pt = mark.point(i);
    std::size_t idx = 0;
    for (int k = 0; k < d; ++k)
      idx += static_cast<std::size_t>(pt[k] - bb.origin[k]) * stride[k];
    bits[idx] = 1;
  }
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    auto y = walk.point(i);
    for (std::size_t j = 0; j < S.size(); ++j) {
      auto n = S.point(j);
      std::size_t idx = 0;
      bool in = true;
      for (int k = 0; k < d; ++k) {
        std::int64_t c = static_cast<std::int64_t>(y[k]) - n[k] - bb.origin[k];
        if (c < 0 || c >= bb.dims[k]) {
          in = false;
          break;
        }
        idx += static_cast<std::size_t>(c) * stride[k];
      }
      if (in && bits[idx]) ++count;
    }
  }
  return sphere_weight(d, lambda2) * static_cast<double>(count);
}

NormCertificate improving_ratio(const LatticeSet& F, const LatticeSet& G,
                                std::int64_t lambda2, double p,
                                const SpherePointSet* sphere,
                                const std::string& label) {
  if (!(p > 0.0) || std::isinf(p))
    throw std::invalid_argument("improving_ratio: p must be positive and finite");
  int d = F.d;
  bool in_range = p > static_cast<double>(d + 1) / (d - 1) && p <= 2.0;
  if (!in_range)
    std::fprintf(stderr, "warning: improving_ratio p=%g outside ((d+1)/(d-1), 2] for d=%d\n",
                 p, d);
  double num = set_bilinear_form(F, G, lambda2, sphere);
  double scale = std::pow(static_cast<double>(lambda2), 0.5 * d * (1.0 - 2.0 / p));
  double sizes = std::pow(static_cast<double>(F.size()), 1.0 / p) *
                 std::pow(static_cast<double>(G.size()), 1.0 / p);
  NormCertificate cert;
  cert.name = "improving_ratio";
  cert.params.d = d;
  cert.params.lambda2 = lambda2;
  cert.params.p = p;
  cert.set_sides(num, scale * sizes);
  cert.witness = label.empty()
                     ? "|F|=" + std::to_string(F.size()) + ",|G|=" + std::to_string(G.size())
                     : label;
  cert.extra = {{"p_in_range", in_range ? 1.0 : 0.0},
                {"F_size", static_cast<double>(F.size())},
                {"G_size", static_cast<double>(G.size())}};
  return cert;
}

namespace {
double cross(double ax, double ay, double bx, double by, double px, double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}
}  // namespace

NormCertificate corollary_ratio(const GridFunction& f1, const GridFunction& f2,
                                const Box& Q, double p1, double p2,
                                std::int64_t lambda2) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || std::isinf(p1) || std::isinf(p2))
    throw std::invalid_argument("corollary_ratio: exponents must be positive and finite");
  int d = f1.d;
  double s = static_cast<double>(d - 1) / (d + 1);
  double x = 1.0 / p1, y = 1.0 / p2;
  // open triangle (0,1)-(1,0)-(s,s); all cross products strictly positive
  bool in_range = cross(0, 1, 1, 0, x, y) > 0 && cross(1, 0, s, s, x, y) > 0 &&
                  cross(s, s, 0, 1, x, y) > 0;
  if (!in_range)
    std::fprintf(stderr,
                 "warning: corollary_ratio (1/p1, 1/p2)=(%g, %g) outside the exponent triangle for d=%d\n",
                 x, y, d);
  double num = bilinear_form(f1, f2, lambda2);
  double n1 = local_norm(f1, Q, p1);
  double n2 = local_norm(f2, Q, p2);
  NormCertificate cert;
  cert.name = "corollary_ratio";
  cert.params.d = d;
  cert.params.lambda2 = lambda2;
  cert.params.p = p1;
  cert.params.p2 = p2;
  cert.set_sides(num, n1 * n2 * static_cast<double>(Q.volume()));
  cert.extra = {{"exponents_in_range", in_range ? 1.0 : 0.0},
                {"norm_f1", n1},
                {"norm_f2", n2}};
  return cert;
}

namespace {

LatticeSet ball_set(int d, std::int64_t r2) {
  LatticeSet s;
  s.d = d;
  std::int64_t r = isqrt64(r2);
  std::vector<std::int64_t> x(d, -r);
  while (true) {
    std::int64_t n2 = 0;
    for (int k = 0; k < d; ++k) n2 += x[k] * x[k];
    if (n2 <= r2)
      for (int k = 0; k < d; ++k) s.coords.push_back(static_cast<std::int32_t>(x[k]));
    int k = d - 1;
    for (; k >= 0; --k) {
      if (++x[k] <= r) break;
      x[k] = -r;
    }
    if (k < 0) break;
  }
  return s;
}

LatticeSet sphere_set(const SpherePointSet& S) {
  LatticeSet s;
  s.d = S.d;
  s.coords.assign(S.coords.begin(), S.coords.end());
  return s;
}

LatticeSet annulus_set(int d, std::int64_t lambda2) {
  std::int64_t lm = isqrt64(lambda2);
  std::int64_t lo = lm >= 2 ? (lm - 2) * (lm - 2) : 0;
  LatticeSet s;
  s.d = d;
  for (std::int64_t m = lo; m <= lambda2; ++m) {
    if (m == 0) {
      for (int k = 0; k < d; ++k) s.coords.push_back(0);
      continue;
    }
    SpherePointSet shell = enumerate_sphere(d, m);
    s.coords.insert(s.coords.end(), shell.coords.begin(), shell.coords.end());
  }
  return s;
}

LatticeSet random_set(int d, std::int64_t lambda2, double density,
                      std::uint64_t seed, std::uint64_t tag) {
  std::int64_t lm = isqrt64(lambda2);
  std::int64_t lo = -(lm / 2), hi = lm - lm / 2;  // box side lm + 1 around 0
  double vol = std::pow(static_cast<double>(lm + 1), d);
  std::int64_t target = static_cast<std::int64_t>(std::llround(density * vol));
  target = std::min<std::int64_t>({target, 20000, static_cast<std::int64_t>(vol)});
  target = std::max<std::int64_t>(target, 1);
  auto eng = seeded_engine({static_cast<std::uint64_t>(d),
                            static_cast<std::uint64_t>(lambda2), tag, seed});
  std::uniform_int_distribution<std::int32_t> coord(static_cast<std::int32_t>(lo),
                                                    static_cast<std::int32_t>(hi));
  std::set<std::vector<std::int32_t>> pts;
  std::vector<std::int32_t> x(d);
  while (static_cast<std::int64_t>(pts.size()) < target) {
    for (int k = 0; k < d; ++k) x[k] = coord(eng);
    pts.insert(x);
  }
  LatticeSet s;
  s.d = d;
  for (const auto& pt : pts) s.coords.insert(s.coords.end(), pt.begin(), pt.end());
  return s;
}

}  // namespace

std::vector<AdversarialPair> adversarial_family(int d, std::int64_t lambda2,
                                                std::uint64_t seed) {
  check_lambda2(lambda2);
  if (d < 2) throw std::invalid_argument("adversarial_family: d must be >= 2");
  std::int64_t lm = isqrt64(lambda2);
  if (lm > 500) throw ResourceCapError("adversarial_family: radius budget exceeded");
  SpherePointSet S = enumerate_sphere(d, lambda2);

  std::vector<std::pair<std::string, LatticeSet>> sets;
  LatticeSet delta;
  delta.d = d;
  delta.coords.assign(d, 0);
  sets.emplace_back("delta", std::move(delta));
  sets.emplace_back("ball1", ball_set(d, 1));
  sets.emplace_back("ball_quarter", ball_set(d, std::max<std::int64_t>(lambda2 / 16, 1)));
  sets.emplace_back("ball_half", ball_set(d, std::max<std::int64_t>(lambda2 / 4, 1)));
  sets.emplace_back("sphere", sphere_set(S));
  sets.emplace_back("annulus2", annulus_set(d, lambda2));
  sets.emplace_back("rand_dense", random_set(d, lambda2, 0.2, seed, 1));
  sets.emplace_back("rand_sparse", random_set(d, lambda2, 0.03, seed, 2));

  auto find = [&](const std::string& name) -> const LatticeSet& {
    for (const auto& [n, s] : sets)
      if (n == name) return s;
    throw std::logic_error("unknown set " + name);
  };
  const std::pair<const char*, const char*> plan[] = {
      {"delta", "sphere"},      {"delta", "delta"},
      {"delta", "ball_half"},   {"ball1", "sphere"},
      {"ball_quarter", "ball_quarter"}, {"ball_half", "ball_half"},
      {"ball_half", "sphere"},  {"sphere", "sphere"},
      {"annulus2", "sphere"},   {"annulus2", "ball_half"},
      {"rand_dense", "rand_dense"}, {"rand_dense", "sphere"},
      {"rand_sparse", "ball_half"}, {"rand_sparse", "rand_dense"},
  };
  std::vector<AdversarialPair> out;
  out.reserve(std::size(plan));
  for (const auto& [a, b] : plan) {
    AdversarialPair pr;
    pr.name = std::string(a) + "|" + b;
    pr.F = find(a);
    pr.G = find(b);
    out.push_back(std::move(pr));
  }
  return out;
}

NormCertificate dyadic_maximal_form(const GridFunction& f,
                                    const GridFunction& g, const Box& E,
                                    std::int64_t lambda0) {
  if (f.d != g.d) throw std::invalid_argument("dyadic_maximal_form: dimension mismatch");
  if (f.periodic || g.periodic)
    throw std::invalid_argument("dyadic_maximal_form: box inputs required");
  if (lambda0 < 2) throw std::invalid_argument("dyadic_maximal_form: lambda0 must be >= 2");
  int d = f.d;
  std::int64_t top = lambda0 * lambda0;
  std::vector<std::int64_t> ms;
  for (std::int64_t m = top / 4 + 1; m < top; ++m)
    if (admissible(d, m)) ms.push_back(m);
  if (ms.empty())
    throw std::invalid_argument("dyadic_maximal_form: no admissible radius in the window");

  std::int64_t lm = isqrt64(top - 1);
  std::int64_t support = 0;
  for (std::int64_t s : f.dims) support = std::max(support, s);
  for (std::int64_t s : g.dims) support = std::max(support, s);
  for (std::int64_t s : E.dims) support = std::max(support, s);
  std::int64_t L = fft::good_size(support + 2 * lm + 1);
  check_fft_cells(d, L);
  std::vector<std::int64_t> dims(d, L);
  std::size_t cells = 1;
  for (int k = 0; k < d; ++k) cells *= static_cast<std::size_t>(L);

  auto fhat = embed(f, L, cells);
  fft::transform(fhat, dims, false);
  std::vector<double> sup(cells, -std::numeric_limits<double>::infinity());
  std::vector<std::complex<double>> work(cells);
  for (std::int64_t m : ms) {
    SpherePointSet S = enumerate_sphere(d, m);
    auto khat = kernel_hat(S, L, d, cells, dims);
    for (std::size_t i = 0; i < cells; ++i) work[i] = fhat[i] * khat[i];
    fft::transform(work, dims, true);
    double w = sphere_weight(d, m);
    for (std::size_t i = 0; i < cells; ++i)
      sup[i] = std::max(sup[i], w * work[i].real());
  }

  KahanSum num;
  std::vector<std::int64_t> x(g.origin);
  for (std::size_t idx = 0; idx < g.values.size(); ++idx) {
    if (g.values[idx] != 0.0)
      num.add(sup[torus_index(x, L, d)] * g.values[idx]);
    for (int k = d - 1; k >= 0; --k) {
      if (++x[k] < g.origin[k] + g.dims[k]) break;
      x[k] = g.origin[k];
    }
  }
  double p = static_cast<double>(d) / (d - 2);
  double nf = local_norm(f, E, p);
  double ng = local_norm(g, E, p);
  NormCertificate cert;
  cert.name = "dyadic_maximal_form";
  cert.params.d = d;
  cert.params.lambda2 = top;
  cert.params.p = p;
  cert.set_sides(num.value(), nf * ng * static_cast<double>(E.volume()));
  cert.witness = "lambda0=" + std::to_string(lambda0) + ",window=[" +
                 std::to_string(ms.front()) + "," + std::to_string(ms.back()) + "]";
  cert.extra = {{"window_count", static_cast<double>(ms.size())},
                {"torus_side", static_cast<double>(L)}};
  return cert;
}

}  // namespace dsphere
