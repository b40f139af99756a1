#pragma once
// Dense real-valued functions on finite boxes of Z^d, or on the periodic
// torus (Z/L)^d. Row-major storage; the box geometry travels with the
// values. Also: finite point sets (for indicator families) and the
// import/export formats.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsphere/certificate.hpp"

namespace dsphere {

struct Box {
  std::vector<std::int64_t> origin;
  std::vector<std::int64_t> dims;
  std::int64_t volume() const {
    std::int64_t v = 1;
    for (std::int64_t s : dims) v *= s;
    return v;
  }
};

struct GridFunction {
  int d = 0;
  std::vector<std::int64_t> origin;  // lowest corner; all zero for torus
  std::vector<std::int64_t> dims;    // all equal to L for torus
  bool periodic = false;
  std::vector<double> values;  // row-major, size = prod(dims)

  std::int64_t volume() const {
    std::int64_t v = 1;
    for (std::int64_t s : dims) v *= s;
    return v;
  }
  // row-major index of an in-box point (absolute coordinates)
  std::size_t index(std::span<const std::int64_t> x) const;
  // value with zero extension outside the box; mod-L wrap when periodic
  double at(std::span<const std::int64_t> x) const;
  double& ref(std::span<const std::int64_t> x);
  bool contains(std::span<const std::int64_t> x) const;
};

GridFunction make_box_grid(std::vector<std::int64_t> origin,
                           std::vector<std::int64_t> dims);
GridFunction make_torus_grid(int d, std::int64_t side);
// delta at a point, box = that single cell
GridFunction delta_grid(std::span<const std::int64_t> x);

// Finite subset of Z^d; flat int32 coordinates, point i at [i*d,(i+1)*d).
struct LatticeSet {
  int d = 0;
  std::vector<std::int32_t> coords;
  std::size_t size() const { return d == 0 ? 0 : coords.size() / d; }
  std::span<const std::int32_t> point(std::size_t i) const {
    return {coords.data() + i * d, static_cast<std::size_t>(d)};
  }
};

// indicator on the tight bounding box (empty set gives a 1-cell zero grid)
GridFunction set_indicator(const LatticeSet& s);
Box bounding_box(const LatticeSet& s);

// Flat binary: little-endian header (u32 d, u8 periodic, i64 origin[d],
// i64 dims[d]) then prod(dims) little-endian doubles.
void save_grid(const GridFunction& g, const std::string& path);
GridFunction load_grid(const std::string& path);

// CSV for small instances: one "# d=..,periodic=.." header line, one
// "x1,...,xd,value" row per cell in row-major order.
void save_grid_csv(const GridFunction& g, const std::string& path);
GridFunction load_grid_csv(const std::string& path);

}  // namespace dsphere
