#include "dsphere/gridfn.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dsphere {
namespace {

// storage cap: keeps a single grid under ~2 GB
constexpr std::int64_t kMaxCells = std::int64_t{1} << 28;

void check_geometry(int d, const std::vector<std::int64_t>& origin,
                    const std::vector<std::int64_t>& dims) {
  if (d <= 0) throw std::invalid_argument("grid: dimension must be positive");
  if (origin.size() != static_cast<std::size_t>(d) ||
      dims.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("grid: origin/dims size mismatch");
  std::int64_t v = 1;
  for (std::int64_t s : dims) {
    if (s <= 0) throw std::invalid_argument("grid: empty side");
    if (v > kMaxCells / s) throw ResourceCapError("grid: cell budget exceeded");
    v *= s;
  }
}

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

template <class T>
void put(std::ostream& os, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  os.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& is) {
  char buf[sizeof(T)];
  is.read(buf, sizeof(T));
  if (!is) throw std::runtime_error("grid file: truncated");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

std::size_t GridFunction::index(std::span<const std::int64_t> x) const {
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) {
    std::int64_t c = x[i] - origin[i];
    if (periodic) c = floor_mod(x[i], dims[i]);
    idx = idx * dims[i] + static_cast<std::size_t>(c);
  }
  return idx;
}

bool GridFunction::contains(std::span<const std::int64_t> x) const {
  if (periodic) return true;
  for (int i = 0; i < d; ++i) {
    std::int64_t c = x[i] - origin[i];
    if (c < 0 || c >= dims[i]) return false;
  }
  return true;
}

double GridFunction::at(std::span<const std::int64_t> x) const {
  if (!contains(x)) return 0.0;
  return values[index(x)];
}

double& GridFunction::ref(std::span<const std::int64_t> x) {
  if (!contains(x)) throw std::out_of_range("grid: point outside box");
  return values[index(x)];
}

GridFunction make_box_grid(std::vector<std::int64_t> origin,
                           std::vector<std::int64_t> dims) {
  int d = static_cast<int>(dims.size());
  check_geometry(d, origin, dims);
  GridFunction g;
  g.d = d;
  g.origin = std::move(origin);
  g.dims = std::move(dims);
  g.values.assign(static_cast<std::size_t>(g.volume()), 0.0);
  return g;
}

GridFunction make_torus_grid(int d, std::int64_t side) {
  std::vector<std::int64_t> origin(d, 0), dims(d, side);
  check_geometry(d, origin, dims);
  GridFunction g = make_box_grid(std::move(origin), std::move(dims));
  g.periodic = true;
  return g;
}

GridFunction delta_grid(std::span<const std::int64_t> x) {
  GridFunction g = make_box_grid(std::vector<std::int64_t>(x.begin(), x.end()),
                                 std::vector<std::int64_t>(x.size(), 1));
  g.values[0] = 1.0;
  return g;
}

Box bounding_box(const LatticeSet& s) {
  if (s.d <= 0) throw std::invalid_argument("lattice set: dimension unset");
  Box b;
  if (s.size() == 0) {
    b.origin.assign(s.d, 0);
    b.dims.assign(s.d, 1);
    return b;
  }
  std::vector<std::int64_t> lo(s.d, std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> hi(s.d, std::numeric_limits<std::int64_t>::min());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto p = s.point(i);
    for (int k = 0; k < s.d; ++k) {
      lo[k] = std::min<std::int64_t>(lo[k], p[k]);
      hi[k] = std::max<std::int64_t>(hi[k], p[k]);
    }
  }
  b.origin = lo;
  b.dims.resize(s.d);
  for (int k = 0; k < s.d; ++k) b.dims[k] = hi[k] - lo[k] + 1;
  return b;
}

GridFunction set_indicator(const LatticeSet& s) {
  Box b = bounding_box(s);
  GridFunction g = make_box_grid(b.origin, b.dims);
  std::vector<std::int64_t> x(s.d);
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto p = s.point(i);
    for (int k = 0; k < s.d; ++k) x[k] = p[k];
    g.values[g.index(x)] = 1.0;
  }
  return g;
}

void save_grid(const GridFunction& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("grid file: cannot open " + path);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.d));
  put<std::uint8_t>(os, g.periodic ? 1 : 0);
  for (std::int64_t v : g.origin) put<std::int64_t>(os, v);
  for (std::int64_t v : g.dims) put<std::int64_t>(os, v);
  for (double v : g.values) put<double>(os, v);
  if (!os) throw std::runtime_error("grid file: write failed");
}

GridFunction load_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("grid file: cannot open " + path);
  auto d = get<std::uint32_t>(is);
  if (d == 0 || d > 16) throw std::runtime_error("grid file: bad dimension");
  auto periodic = get<std::uint8_t>(is);
  if (periodic > 1) throw std::runtime_error("grid file: bad periodic flag");
  std::vector<std::int64_t> origin(d), dims(d);
  for (auto& v : origin) v = get<std::int64_t>(is);
  for (auto& v : dims) v = get<std::int64_t>(is);
  check_geometry(static_cast<int>(d), origin, dims);
  GridFunction g;
  g.d = static_cast<int>(d);
  g.origin = std::move(origin);
  g.dims = std::move(dims);
  g.periodic = periodic == 1;
  if (g.periodic)
    for (int i = 0; i < g.d; ++i)
      if (g.origin[i] != 0 || g.dims[i] != g.dims[0])
        throw std::runtime_error("grid file: torus must be cubic at origin");
  g.values.resize(static_cast<std::size_t>(g.volume()));
  for (double& v : g.values) v = get<double>(is);
  char extra;
  if (is.read(&extra, 1)) throw std::runtime_error("grid file: trailing data");
  return g;
}

void save_grid_csv(const GridFunction& g, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("grid file: cannot open " + path);
  os << "# d=" << g.d << ",periodic=" << (g.periodic ? 1 : 0) << "\n";
  std::vector<std::int64_t> x(g.origin);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    for (int k = 0; k < g.d; ++k) os << x[k] << ",";
    os << format_double(g.values[i]) << "\n";
    for (int k = g.d - 1; k >= 0; --k) {
      if (++x[k] < g.origin[k] + g.dims[k]) break;
      x[k] = g.origin[k];
    }
  }
  if (!os) throw std::runtime_error("grid file: write failed");
}

GridFunction load_grid_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("grid file: cannot open " + path);
  std::string header;
  std::getline(is, header);
  int d = 0, periodic = 0;
  if (std::sscanf(header.c_str(), "# d=%d,periodic=%d", &d, &periodic) != 2 ||
      d <= 0 || d > 16)
    throw std::runtime_error("grid file: bad csv header");
  std::vector<std::vector<std::int64_t>> pts;
  std::vector<double> vals;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::int64_t> x(d);
    std::string tok;
    for (int k = 0; k < d; ++k) {
      if (!std::getline(ss, tok, ',')) throw std::runtime_error("grid file: short csv row");
      x[k] = std::stoll(tok);
    }
    if (!std::getline(ss, tok)) throw std::runtime_error("grid file: missing value");
    pts.push_back(std::move(x));
    vals.push_back(std::stod(tok));
  }
  if (pts.empty()) throw std::runtime_error("grid file: empty csv");
  std::vector<std::int64_t> lo = pts[0], hi = pts[0];
  for (const auto& x : pts)
    for (int k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  std::vector<std::int64_t> dims(d);
  for (int k = 0; k < d; ++k) dims[k] = hi[k] - lo[k] + 1;
  GridFunction g = make_box_grid(lo, dims);
  if (pts.size() != g.values.size())
    throw std::runtime_error("grid file: csv rows do not tile the box");
  g.periodic = periodic == 1;
  for (std::size_t i = 0; i < pts.size(); ++i) g.values[g.index(pts[i])] = vals[i];
  return g;
}

}  // namespace dsphere
