// Geometry and measure layer for the weighted half-space R^n_+.
//
// Grids are uniform tensor meshes of cell centers on a dyadic box
// [0, 2^L]^n with the last coordinate playing the role of the Bessel
// direction x_n.  All quadrature is midpoint quadrature against the
// weight x_n^nu dx; samples sit at cell centers x = (i + 1/2) h so the
// weight is evaluable everywhere (x_n > 0 strictly).

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhm {

inline constexpr int kMaxDim = 6;

using Index = std::vector<std::int64_t>;

namespace detail {

// true iff x is an exact power of two (2^k, k in Z)
inline bool is_pow2(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return false;
  int e = 0;
  return std::frexp(x, &e) == 0.5;
}

}  // namespace detail

// Uniform grid of cell centers on the dyadic box [0, 2^L]^n, carrying the
// weight exponent nu of the measure x_n^nu dx.
struct HalfSpaceGrid {
  int dim = 1;          // n
  double h = 1.0;       // spacing; must be a power of two
  int box_level = 0;    // box side = 2^box_level
  double nu = 0.0;      // weight exponent, >= 0
  double offset = 0.5;  // cell-center offset in units of h

  HalfSpaceGrid() = default;
  HalfSpaceGrid(int n, double spacing, int L, double weight_exponent)
      : dim(n), h(spacing), box_level(L), nu(weight_exponent) {
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("HalfSpaceGrid: dim out of range");
    if (!detail::is_pow2(h))
      throw std::invalid_argument("HalfSpaceGrid: spacing must be a power of two");
    if (nu < 0.0) throw std::invalid_argument("HalfSpaceGrid: nu must be >= 0");
    double cells = std::ldexp(1.0, box_level) / h;
    if (cells < 1.0 || cells > 1.0e8)
      throw std::invalid_argument("HalfSpaceGrid: box side not representable on lattice");
  }

  double side() const { return std::ldexp(1.0, box_level); }

  // cells per axis; exact power of two
  std::int64_t cells() const {
    return static_cast<std::int64_t>(std::llround(side() / h));
  }

  std::int64_t total_cells() const {
    std::int64_t t = 1;
    for (int d = 0; d < dim; ++d) t *= cells();
    return t;
  }

  double coord(std::int64_t i) const { return (static_cast<double>(i) + offset) * h; }

  // finest admissible dyadic level: cube side h = 2^{-level}
  int finest_level() const {
    int e = 0;
    std::frexp(h, &e);
    return 1 - e;  // h = 2^{e-1} * 0.5 ... frexp: h = 0.5 * 2^e -> h = 2^{e-1}
  }

  bool operator==(const HalfSpaceGrid& o) const {
    return dim == o.dim && h == o.h && box_level == o.box_level && nu == o.nu &&
           offset == o.offset;
  }
  bool operator!=(const HalfSpaceGrid& o) const { return !(*this == o); }
};

// Dyadic cube Q_{jk} = { x : 2^{-j} k_i <= x_i <= 2^{-j}(k_i + 1) }.
struct DyadicCube {
  int level = 0;  // j
  Index index;    // k, length n

  double side() const { return std::ldexp(1.0, -level); }
  double lo(int d) const { return side() * static_cast<double>(index[d]); }
  double hi(int d) const { return side() * static_cast<double>(index[d] + 1); }

  bool contains(const double* x, int n) const {
    for (int d = 0; d < n; ++d)
      if (x[d] < lo(d) || x[d] > hi(d)) return false;
    return true;
  }

  // true iff other is contained in *this (exact lattice arithmetic)
  bool contains_cube(const DyadicCube& other) const {
    if (other.level < level) return false;
    int shift = other.level - level;
    for (std::size_t d = 0; d < index.size(); ++d)
      if ((other.index[d] >> shift) != index[d]) return false;
    return true;
  }

  bool operator==(const DyadicCube& o) const {
    return level == o.level && index == o.index;
  }
};

// Euclidean ball spec; membership |x - center| <= radius.
struct BallSpec {
  std::vector<double> center;
  double radius = 0.0;

  bool contains(const double* x, int n) const {
    double s = 0.0;
    for (int d = 0; d < n; ++d) {
      double diff = x[d] - center[d];
      s += diff * diff;
    }
    return s <= radius * radius;
  }
};

// Axis-aligned box, used for triple cubes 3Q.
struct BoxRegion {
  std::vector<double> lo, hi;

  // membership is implicitly clipped to x_n >= 0: grid points always
  // satisfy x_n > 0, so only the interval test matters
  bool contains(const double* x, int n) const {
    for (int d = 0; d < n; ++d)
      if (x[d] < lo[d] || x[d] > hi[d]) return false;
    return true;
  }
  double side(int d) const { return hi[d] - lo[d]; }
};

// 3Q: the cube concentric with Q of side length 3 l(Q).
inline BoxRegion triple_cube(const DyadicCube& q) {
  BoxRegion r;
  double l = q.side();
  r.lo.resize(q.index.size());
  r.hi.resize(q.index.size());
  for (std::size_t d = 0; d < q.index.size(); ++d) {
    r.lo[d] = q.lo(static_cast<int>(d)) - l;
    r.hi[d] = q.hi(static_cast<int>(d)) + l;
  }
  return r;
}

// Real values sampled at the cell centers of a HalfSpaceGrid, row-major
// with the last (Bessel) axis fastest.  Immutable by convention after
// construction; operations below return fresh functions.
struct GridFunction {
  HalfSpaceGrid grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(const HalfSpaceGrid& g)
      : grid(g), values(static_cast<std::size_t>(g.total_cells()), 0.0) {}
  GridFunction(const HalfSpaceGrid& g, std::vector<double> v)
      : grid(g), values(std::move(v)) {
    if (static_cast<std::int64_t>(values.size()) != g.total_cells())
      throw std::invalid_argument("GridFunction: value count does not match grid");
  }

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  std::size_t size() const { return values.size(); }

  std::int64_t flat(const std::int64_t* idx) const {
    std::int64_t m = grid.cells(), f = 0;
    for (int d = 0; d < grid.dim; ++d) f = f * m + idx[d];
    return f;
  }

  void unflat(std::int64_t f, std::int64_t* idx) const {
    std::int64_t m = grid.cells();
    for (int d = grid.dim - 1; d >= 0; --d) {
      idx[d] = f % m;
      f /= m;
    }
  }

  void cell_center(std::int64_t f, double* x) const {
    std::int64_t idx[kMaxDim];
    unflat(f, idx);
    for (int d = 0; d < grid.dim; ++d) x[d] = grid.coord(idx[d]);
  }

  // Multilinear interpolation between cell centers; the function is
  // extended by zero outside the box (zero ghost cells), so samples decay
  // linearly to 0 across the outermost half-cell and vanish beyond.
  double sample(const double* x) const {
    std::int64_t m = grid.cells();
    std::int64_t base[kMaxDim];
    double w1[kMaxDim];
    for (int d = 0; d < grid.dim; ++d) {
      double u = x[d] / grid.h - grid.offset;  // center index coordinate
      double fl = std::floor(u);
      std::int64_t i0 = static_cast<std::int64_t>(fl);
      if (i0 < -1 || i0 >= m) return 0.0;
      base[d] = i0;
      w1[d] = u - fl;
    }
    double acc = 0.0;
    int corners = 1 << grid.dim;
    for (int c = 0; c < corners; ++c) {
      double w = 1.0;
      std::int64_t f = 0;
      bool inside = true;
      for (int d = 0; d < grid.dim; ++d) {
        int bit = (c >> d) & 1;
        std::int64_t i = base[d] + bit;
        w *= bit ? w1[d] : (1.0 - w1[d]);
        if (i < 0 || i >= m) {
          inside = false;
          break;
        }
        f = f * m + i;
      }
      if (inside && w != 0.0) acc += w * values[f];
    }
    return acc;
  }

  double max_abs() const {
    double v = 0.0;
    for (double x : values) v = std::max(v, std::abs(x));
    return v;
  }

  bool all_finite() const {
    for (double x : values)
      if (!std::isfinite(x)) return false;
    return true;
  }

  void require_same_grid(const GridFunction& o, const char* what) const {
    if (grid != o.grid)
      throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
};

namespace detail {

// index range [lo, hi) of grid cells along one axis whose centers fall in
// the closed interval [a, b]; centers never sit on lattice boundaries so
// the boundary convention is immaterial for aligned cubes
inline void axis_cell_range(const HalfSpaceGrid& g, double a, double b,
                            std::int64_t& lo, std::int64_t& hi) {
  std::int64_t m = g.cells();
  lo = static_cast<std::int64_t>(std::ceil(a / g.h - g.offset));
  hi = static_cast<std::int64_t>(std::floor(b / g.h - g.offset)) + 1;
  if (lo < 0) lo = 0;
  if (hi > m) hi = m;
  if (hi < lo) hi = lo;
}

}  // namespace detail

// Weighted measure |E|_nu of a region, by midpoint quadrature over the
// cells whose centers lie in the region.  Throws on empty intersection.
template <class Region>
double weighted_volume(const Region& region, double nu, const HalfSpaceGrid& grid) {
  GridFunction probe(grid);  // used only for index helpers
  double hn = std::pow(grid.h, grid.dim);
  double acc = 0.0;
  bool any = false;
  double x[kMaxDim];
  std::int64_t total = grid.total_cells();
  for (std::int64_t f = 0; f < total; ++f) {
    probe.cell_center(f, x);
    if (!region.contains(x, grid.dim)) continue;
    any = true;
    acc += std::pow(x[grid.dim - 1], nu) * hn;
  }
  if (!any) throw std::runtime_error("weighted_volume: empty region");
  return acc;
}

// Specialization for dyadic cubes: iterates exactly the cube's cells.
inline double weighted_volume(const DyadicCube& q, double nu,
                              const HalfSpaceGrid& grid) {
  std::int64_t lo[kMaxDim], hi[kMaxDim];
  std::int64_t count = 1;
  for (int d = 0; d < grid.dim; ++d) {
    detail::axis_cell_range(grid, q.lo(d), q.hi(d), lo[d], hi[d]);
    count *= (hi[d] - lo[d]);
  }
  if (count <= 0) throw std::runtime_error("weighted_volume: empty region");
  double hn = std::pow(grid.h, grid.dim);
  // separable: only the last axis carries the weight
  double cross = 1.0;
  for (int d = 0; d + 1 < grid.dim; ++d)
    cross *= static_cast<double>(hi[d] - lo[d]);
  double acc = 0.0;
  for (std::int64_t i = lo[grid.dim - 1]; i < hi[grid.dim - 1]; ++i)
    acc += std::pow(grid.coord(i), nu);
  return acc * cross * hn;
}

// All dyadic cubes of one level tiling the grid box.
inline std::vector<DyadicCube> dyadic_cubes(int level, const HalfSpaceGrid& grid) {
  if (level < -grid.box_level || level > grid.finest_level())
    throw std::invalid_argument("dyadic_cubes: level out of range for grid");
  std::int64_t per_axis = std::int64_t(1) << (grid.box_level + level);
  std::vector<DyadicCube> out;
  DyadicCube q;
  q.level = level;
  q.index.assign(grid.dim, 0);
  std::int64_t total = 1;
  for (int d = 0; d < grid.dim; ++d) total *= per_axis;
  out.reserve(static_cast<std::size_t>(total));
  for (std::int64_t f = 0; f < total; ++f) {
    std::int64_t r = f;
    for (int d = grid.dim - 1; d >= 0; --d) {
      q.index[d] = r % per_axis;
      r /= per_axis;
    }
    out.push_back(q);
  }
  return out;
}

// Smallest dyadic ancestor chain helper: the level-(j-1) parent.
inline DyadicCube parent_cube(const DyadicCube& q) {
  DyadicCube p;
  p.level = q.level - 1;
  p.index.resize(q.index.size());
  for (std::size_t d = 0; d < q.index.size(); ++d)
    p.index[d] = q.index[d] >> 1;
  return p;
}

}  // namespace bhm
