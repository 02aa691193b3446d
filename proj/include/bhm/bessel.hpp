// Bessel-analytic core: the generalized shift T^y, the weighted
// convolution f (x) g, mollifier rescaling phi_t = t^{-n-nu} phi(./t),
// the Poisson-type kernel, the Bessel derivative B_n, the seminorm
// p_{N,nu} and the normalized test family.
//
// T^y is the Gegenbauer average
//   (T^y f)(x) = c_nu \int_0^pi f(x'-y', sqrt(x_n^2 - 2 x_n y_n cos a + y_n^2))
//                sin^{nu-1} a  da,
// evaluated by Gauss-Jacobi quadrature in u = cos a.  The degenerate
// nu = 0 branch is the two-point even-reflection formula, realized here
// as the same average with nodes u = +-1 and weights 1/2.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bhm/grid.hpp"
#include "bhm/quadrature.hpp"

namespace bhm {

inline constexpr int kDefaultShiftNodes = 32;

// ---------------------------------------------------------------------------
// quadrature helpers

inline QuadratureRule shift_rule_or_degenerate(int nodes, double nu) {
  if (nu > 0.0) return shift_rule(nodes, nu);
  QuadratureRule r;
  r.nodes = {1.0, -1.0};
  r.weights = {0.5, 0.5};
  return r;
}

// Weighted integral \int f x_n^nu dx by midpoint quadrature.
inline double weighted_integral(const GridFunction& f) {
  const HalfSpaceGrid& g = f.grid;
  std::int64_t m = g.cells();
  double hn = std::pow(g.h, g.dim);
  // separable accumulation: last axis fastest in memory
  std::int64_t blocks = f.values.size() / static_cast<std::size_t>(m);
  std::vector<double> wlast(static_cast<std::size_t>(m));
  for (std::int64_t k = 0; k < m; ++k)
    wlast[static_cast<std::size_t>(k)] = std::pow(g.coord(k), g.nu);
  double acc = 0.0;
  for (std::int64_t bkk = 0; bkk < blocks; ++bkk) {
    const double* row = f.values.data() + bkk * m;
    for (std::int64_t k = 0; k < m; ++k) acc += row[k] * wlast[k];
  }
  return acc * hn;
}

// ---------------------------------------------------------------------------
// test functions and scale sets

struct TestFunction {
  std::string name;
  GridFunction profile;
  double total_mass = 0.0;
  mutable std::map<int, double> seminorm_cache;  // N -> p_{N,nu}
};

// Sample an analytic profile on the grid; optionally normalize so the
// weighted integral is exactly 1 in grid quadrature.
template <class F>
TestFunction make_test_function(const std::string& name, const HalfSpaceGrid& grid,
                                F&& profile, bool unit_mass = true) {
  TestFunction tf;
  tf.name = name;
  tf.profile = GridFunction(grid);
  double x[kMaxDim];
  for (std::int64_t i = 0; i < grid.total_cells(); ++i) {
    tf.profile.cell_center(i, x);
    tf.profile[static_cast<std::size_t>(i)] = profile(x, grid.dim);
  }
  tf.total_mass = weighted_integral(tf.profile);
  if (unit_mass) {
    if (tf.total_mass == 0.0)
      throw std::invalid_argument("make_test_function: zero-mass profile");
    for (double& v : tf.profile.values) v /= tf.total_mass;
    tf.total_mass = weighted_integral(tf.profile);
  }
  return tf;
}

// Smooth compactly supported bump of product form, even in every
// coordinate; used both as default mollifier and in the grand family.
inline TestFunction default_mollifier(const HalfSpaceGrid& grid,
                                      double width_fraction = 0.25) {
  double w = grid.side() * width_fraction;
  return make_test_function("mollifier", grid, [w](const double* x, int n) {
    double v = 1.0;
    for (int d = 0; d < n; ++d) {
      double s = x[d] / w;
      double b = 1.0 - s * s;
      if (b <= 0.0) return 0.0;
      v *= b * b * b * b;
    }
    return v;
  });
}

struct ScaleSet {
  std::vector<double> scales;  // positive, strictly decreasing

  static ScaleSet dyadic(int m_min, int m_max, int per_octave = 1) {
    if (m_max < m_min) throw std::invalid_argument("ScaleSet: empty range");
    if (per_octave < 1) throw std::invalid_argument("ScaleSet: per_octave >= 1");
    ScaleSet s;
    for (int m = m_min; m <= m_max; ++m)
      for (int k = 0; k < per_octave; ++k) {
        if (m == m_max && k > 0) break;
        s.scales.push_back(std::ldexp(1.0, -m) *
                           std::pow(2.0, -double(k) / per_octave));
      }
    return s;
  }

  bool empty() const { return scales.empty(); }
};

// ---------------------------------------------------------------------------
// generalized shift

namespace detail {

struct RadialStencil {
  double w0 = 0.0, w1 = 0.0;
  std::int64_t k0 = kSkip;
  static constexpr std::int64_t kSkip = -1000000;
};

// Interpolation stencil along the Bessel axis for the radial coordinate
// R(x_n, y_n, u) = sqrt(x_n^2 - 2 x_n y_n u + y_n^2).
inline RadialStencil radial_stencil(double xn, double yn, double u,
                                    const HalfSpaceGrid& g, std::int64_t m) {
  double r2 = xn * xn - 2.0 * xn * yn * u + yn * yn;
  double r = r2 > 0.0 ? std::sqrt(r2) : 0.0;
  double uc = r / g.h - g.offset;
  double fl = std::floor(uc);
  RadialStencil s;
  std::int64_t k0 = static_cast<std::int64_t>(fl);
  if (k0 < -1 || k0 >= m) return s;  // reads as zero
  s.k0 = k0;
  s.w1 = uc - fl;
  s.w0 = 1.0 - s.w1;
  if (k0 == -1) s.w0 = 0.0;  // ghost cell below x_n = 0 (even axis), value 0
  return s;
}

inline double apply_stencil(const double* col, std::int64_t m,
                            const RadialStencil& s) {
  double v = 0.0;
  if (s.k0 >= 0) v += s.w0 * col[s.k0];
  std::int64_t k1 = s.k0 + 1;
  if (k1 >= 0 && k1 < m && s.w1 != 0.0) v += s.w1 * col[k1];
  return v;
}

}  // namespace detail

// (T^y f)(x) on the whole grid; y_n >= 0 required.  Values of f outside
// the box read as zero.
inline GridFunction bessel_shift(const GridFunction& f, const std::vector<double>& y,
                                 int quad_nodes = kDefaultShiftNodes) {
  const HalfSpaceGrid& g = f.grid;
  if (static_cast<int>(y.size()) != g.dim)
    throw std::invalid_argument("bessel_shift: shift vector has wrong dimension");
  if (y[g.dim - 1] < 0.0)
    throw std::invalid_argument("bessel_shift: y_n must be nonnegative");
  QuadratureRule rule = shift_rule_or_degenerate(quad_nodes, g.nu);
  GridFunction out(g);
  double x[kMaxDim], arg[kMaxDim];
  std::int64_t m = g.cells();
  for (std::int64_t i = 0; i < g.total_cells(); ++i) {
    f.cell_center(i, x);
    for (int d = 0; d + 1 < g.dim; ++d) arg[d] = x[d] - y[d];
    double xn = x[g.dim - 1], yn = y[g.dim - 1];
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      double r2 = xn * xn - 2.0 * xn * yn * rule.nodes[q] + yn * yn;
      arg[g.dim - 1] = r2 > 0.0 ? std::sqrt(r2) : 0.0;
      acc += rule.weights[q] * f.sample(arg);
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// generalized convolution

// (f (x) g)(x) = sum_y f(y) (T^y g)(x) y_n^nu h^n, the discrete form of
// \int f(y) T^y g(x) y_n^nu dy.  The evaluation is windowed by the
// support of g: skipped terms are exactly zero, so the result matches the
// full double loop term for term.
inline GridFunction bessel_convolve(const GridFunction& f, const GridFunction& g,
                                    int quad_nodes = kDefaultShiftNodes) {
  f.require_same_grid(g, "bessel_convolve");
  const HalfSpaceGrid& gr = f.grid;
  const int n = gr.dim;
  const std::int64_t m = gr.cells();
  GridFunction out(gr);

  // support box of g (center indices of the nonzero extent)
  std::int64_t glo[kMaxDim], ghi[kMaxDim];
  for (int d = 0; d < n; ++d) {
    glo[d] = m;
    ghi[d] = -1;
  }
  {
    std::int64_t idx[kMaxDim];
    for (std::int64_t i = 0; i < gr.total_cells(); ++i) {
      if (g.values[static_cast<std::size_t>(i)] == 0.0) continue;
      g.unflat(i, idx);
      for (int d = 0; d < n; ++d) {
        glo[d] = std::min(glo[d], idx[d]);
        ghi[d] = std::max(ghi[d], idx[d]);
      }
    }
  }
  if (ghi[0] < 0) return out;  // g identically zero

  QuadratureRule rule = shift_rule_or_degenerate(quad_nodes, gr.nu);
  const int nq = static_cast<int>(rule.nodes.size());

  // weighted source terms f(y) y_n^nu h^n
  double hn = std::pow(gr.h, n);
  std::vector<double> wf(f.values.size());
  {
    std::int64_t idx[kMaxDim];
    for (std::int64_t i = 0; i < gr.total_cells(); ++i) {
      f.unflat(i, idx);
      wf[static_cast<std::size_t>(i)] =
          f.values[static_cast<std::size_t>(i)] *
          std::pow(gr.coord(idx[n - 1]), gr.nu) * hn;
    }
  }

  // radial stencil table when affordable, otherwise computed on the fly
  const bool table = (m * m * nq) <= (std::int64_t(1) << 22);
  std::vector<detail::RadialStencil> sten;
  if (table) {
    sten.resize(static_cast<std::size_t>(m * m * nq));
    for (std::int64_t a = 0; a < m; ++a)
      for (std::int64_t b = 0; b < m; ++b)
        for (int q = 0; q < nq; ++q)
          sten[static_cast<std::size_t>((a * m + b) * nq + q)] =
              detail::radial_stencil(gr.coord(a), gr.coord(b), rule.nodes[q], gr, m);
  }

  // midpoint-averaged copies of g along the primed axes: the primed
  // argument x' - y' lands exactly on lattice edges, where multilinear
  // interpolation reduces to averaging adjacent centers with weight 1/2
  std::vector<double> gmid;
  std::int64_t em = m + 1;  // edge count per primed axis
  if (n == 2) {
    gmid.assign(static_cast<std::size_t>(em * m), 0.0);
    for (std::int64_t e = 0; e <= m; ++e)
      for (std::int64_t k = 0; k < m; ++k) {
        double lo = (e > 0) ? g.values[static_cast<std::size_t>((e - 1) * m + k)] : 0.0;
        double hi2 = (e < m) ? g.values[static_cast<std::size_t>(e * m + k)] : 0.0;
        gmid[static_cast<std::size_t>(e * m + k)] = 0.5 * lo + 0.5 * hi2;
      }
  } else if (n == 3) {
    gmid.assign(static_cast<std::size_t>(em * em * m), 0.0);
    auto gat = [&](std::int64_t i, std::int64_t j, std::int64_t k) {
      if (i < 0 || i >= m || j < 0 || j >= m) return 0.0;
      return g.values[static_cast<std::size_t>((i * m + j) * m + k)];
    };
    for (std::int64_t e1 = 0; e1 <= m; ++e1)
      for (std::int64_t e2 = 0; e2 <= m; ++e2)
        for (std::int64_t k = 0; k < m; ++k)
          gmid[static_cast<std::size_t>((e1 * em + e2) * m + k)] =
              0.25 * (gat(e1 - 1, e2 - 1, k) + gat(e1 - 1, e2, k) +
                      gat(e1, e2 - 1, k) + gat(e1, e2, k));
  } else if (n > 3) {
    throw std::invalid_argument("bessel_convolve: dim > 3 not supported");
  }

  const double* gcol0 = (n == 1) ? g.values.data() : gmid.data();
  std::int64_t reach_n = ghi[n - 1] + 1;  // |i_n - j_n| beyond this reads zero

  std::int64_t xi[kMaxDim], yi[kMaxDim];
  for (std::int64_t xf = 0; xf < gr.total_cells(); ++xf) {
    out.unflat(xf, xi);
    const std::int64_t a = xi[n - 1];
    double xn = gr.coord(a);
    // y window per axis
    std::int64_t wlo[kMaxDim], whi[kMaxDim];
    for (int d = 0; d + 1 < n; ++d) {
      wlo[d] = std::max<std::int64_t>(0, xi[d] - ghi[d] - 1);
      whi[d] = std::min<std::int64_t>(m - 1, xi[d] - glo[d]);
    }
    wlo[n - 1] = std::max<std::int64_t>(0, a - reach_n);
    whi[n - 1] = std::min<std::int64_t>(m - 1, a + reach_n);

    double acc = 0.0;
    for (int d = 0; d < n; ++d) yi[d] = wlo[d];
    bool more = true;
    for (; more;) {
      // advance over the window in row-major order
      std::int64_t yflat = 0;
      for (int d = 0; d < n; ++d) yflat = yflat * m + yi[d];
      double w = wf[static_cast<std::size_t>(yflat)];
      if (w != 0.0) {
        const std::int64_t b = yi[n - 1];
        const double* col;
        if (n == 1) {
          col = gcol0;
        } else if (n == 2) {
          std::int64_t e = xi[0] - yi[0];  // in [0..m] by window construction
          col = gcol0 + e * m;
        } else {
          std::int64_t e1 = xi[0] - yi[0], e2 = xi[1] - yi[1];
          col = gcol0 + (e1 * em + e2) * m;
        }
        double tyg = 0.0;
        if (table) {
          const detail::RadialStencil* s = sten.data() + (a * m + b) * nq;
          for (int q = 0; q < nq; ++q)
            tyg += rule.weights[static_cast<std::size_t>(q)] *
                   detail::apply_stencil(col, m, s[q]);
        } else {
          double yn = gr.coord(b);
          for (int q = 0; q < nq; ++q) {
            detail::RadialStencil s = detail::radial_stencil(
                xn, yn, rule.nodes[static_cast<std::size_t>(q)], gr, m);
            tyg += rule.weights[static_cast<std::size_t>(q)] *
                   detail::apply_stencil(col, m, s);
          }
        }
        acc += w * tyg;
      }
      // increment multi-index
      more = false;
      for (int d = n - 1; d >= 0; --d) {
        if (++yi[d] <= whi[d]) {
          more = true;
          break;
        }
        yi[d] = wlo[d];
      }
    }
    out[static_cast<std::size_t>(xf)] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// mollifier rescaling and the Poisson-type kernel

// phi_t(x) = t^{-n-nu} phi(x/t), resampled on the grid by interpolation.
inline TestFunction mollifier_rescale(const TestFunction& phi, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("mollifier_rescale: t must be > 0");
  const HalfSpaceGrid& g = phi.profile.grid;
  // support extent of the profile (max over axes, in length units)
  double ext = 0.0;
  {
    std::int64_t idx[kMaxDim];
    for (std::int64_t i = 0; i < g.total_cells(); ++i) {
      if (phi.profile.values[static_cast<std::size_t>(i)] == 0.0) continue;
      phi.profile.unflat(i, idx);
      for (int d = 0; d < g.dim; ++d)
        ext = std::max(ext, g.coord(idx[d]));
    }
  }
  if (ext * t < g.h)
    throw std::runtime_error("mollifier_rescale: under-resolved scale t=" +
                             std::to_string(t));
  TestFunction out;
  out.name = phi.name + "@" + std::to_string(t);
  out.profile = GridFunction(g);
  double scale = std::pow(t, -double(g.dim) - g.nu);
  double x[kMaxDim], xt[kMaxDim];
  for (std::int64_t i = 0; i < g.total_cells(); ++i) {
    out.profile.cell_center(i, x);
    for (int d = 0; d < g.dim; ++d) xt[d] = x[d] / t;
    out.profile[static_cast<std::size_t>(i)] = scale * phi.profile.sample(xt);
  }
  out.total_mass = weighted_integral(out.profile);
  return out;
}

// Normalizer of the Poisson-type kernel on this grid: the midpoint sum of
// the unnormalized t = 1 kernel.  Using one normalizer for every t keeps
// the scaling identity P_t(x) = t^{-n-nu} P_1(x/t) exact.
inline double poisson_normalizer(const HalfSpaceGrid& g) {
  double e = 0.5 * (g.dim + 1.0 + g.nu);
  double hn = std::pow(g.h, g.dim);
  double x[kMaxDim];
  GridFunction probe(g);
  double acc = 0.0;
  for (std::int64_t i = 0; i < g.total_cells(); ++i) {
    probe.cell_center(i, x);
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
    acc += std::pow(1.0 + r2, -e) * std::pow(x[g.dim - 1], g.nu) * hn;
  }
  return acc;
}

inline GridFunction poisson_kernel(double t, const HalfSpaceGrid& g) {
  if (!(t > 0.0)) throw std::invalid_argument("poisson_kernel: t must be > 0");
  double z = poisson_normalizer(g);
  double e = 0.5 * (g.dim + 1.0 + g.nu);
  GridFunction out(g);
  double x[kMaxDim];
  for (std::int64_t i = 0; i < g.total_cells(); ++i) {
    out.cell_center(i, x);
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
    out[static_cast<std::size_t>(i)] = t / (z * std::pow(t * t + r2, e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// derivatives and the grand-maximal seminorm

// B_n f = d^2 f/dx_n^2 + (nu/x_n) df/dx_n, central differences at
// interior points, second-order one-sided at the box edges.
inline GridFunction bessel_derivative(const GridFunction& f) {
  const HalfSpaceGrid& g = f.grid;
  std::int64_t m = g.cells();
  if (m < 3) throw std::invalid_argument("bessel_derivative: need >= 3 cells in x_n");
  GridFunction out(g);
  double h = g.h, h2 = h * h;
  std::int64_t rows = f.values.size() / static_cast<std::size_t>(m);
  for (std::int64_t r = 0; r < rows; ++r) {
    const double* v = f.values.data() + r * m;
    double* o = out.values.data() + r * m;
    for (std::int64_t k = 0; k < m; ++k) {
      double d1, d2;
      if (k == 0) {
        d1 = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        d2 = (m >= 4) ? (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2
                      : (v[0] - 2.0 * v[1] + v[2]) / h2;
      } else if (k == m - 1) {
        d1 = (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]) / (2.0 * h);
        d2 = (m >= 4) ? (2.0 * v[m - 1] - 5.0 * v[m - 2] + 4.0 * v[m - 3] - v[m - 4]) / h2
                      : (v[m - 1] - 2.0 * v[m - 2] + v[m - 3]) / h2;
      } else {
        d1 = (v[k + 1] - v[k - 1]) / (2.0 * h);
        d2 = (v[k + 1] - 2.0 * v[k] + v[k - 1]) / h2;
      }
      o[k] = d2 + g.nu / g.coord(k) * d1;
    }
  }
  return out;
}

// Central partial derivative along one primed axis, one-sided at edges.
inline GridFunction partial_derivative(const GridFunction& f, int axis) {
  const HalfSpaceGrid& g = f.grid;
  if (axis < 0 || axis >= g.dim - 1)
    throw std::invalid_argument("partial_derivative: axis must be primed");
  std::int64_t m = g.cells();
  if (m < 3) throw std::invalid_argument("partial_derivative: need >= 3 cells");
  GridFunction out(g);
  // stride of the axis in the flat layout
  std::int64_t stride = 1;
  for (int d = g.dim - 1; d > axis; --d) stride *= m;
  double h = g.h;
  std::int64_t idx[kMaxDim];
  for (std::int64_t i = 0; i < g.total_cells(); ++i) {
    f.unflat(i, idx);
    std::int64_t k = idx[axis];
    double d1;
    const double* v = f.values.data();
    if (k == 0)
      d1 = (-3.0 * v[i] + 4.0 * v[i + stride] - v[i + 2 * stride]) / (2.0 * h);
    else if (k == m - 1)
      d1 = (3.0 * v[i] - 4.0 * v[i - stride] + v[i - 2 * stride]) / (2.0 * h);
    else
      d1 = (v[i + stride] - v[i - stride]) / (2.0 * h);
    out[static_cast<std::size_t>(i)] = d1;
  }
  return out;
}

// p_{N,nu}(phi) = sup_x (1+|x|)^N sum_{|alpha|<=N} |D_{x'}^{alpha'}
// B_n^{alpha_n} phi(x)| x_n^nu.  Cached per N on the TestFunction.
inline double seminorm_pN(const TestFunction& phi, int N) {
  if (N < 0) throw std::invalid_argument("seminorm_pN: N must be >= 0");
  auto it = phi.seminorm_cache.find(N);
  if (it != phi.seminorm_cache.end()) return it->second;

  const HalfSpaceGrid& g = phi.profile.grid;
  const int n = g.dim;
  // B_n^k phi for k = 0..N
  std::vector<GridFunction> bessel_pow;
  bessel_pow.push_back(phi.profile);
  for (int k = 1; k <= N; ++k)
    bessel_pow.push_back(bessel_derivative(bessel_pow.back()));

  // accumulate sum over multi-indices of |D^{alpha'} B_n^{alpha_n} phi|
  GridFunction total(g);
  std::vector<int> alpha(static_cast<std::size_t>(n), 0);
  std::function<void(int, int, const GridFunction&)> rec =
      [&](int axis, int budget, const GridFunction& base) {
        if (axis == n - 1) {
          for (std::size_t i = 0; i < total.size(); ++i)
            total[i] += std::abs(base[i]);
          return;
        }
        rec(axis + 1, budget, base);
        GridFunction cur = base;
        for (int k = 1; k <= budget; ++k) {
          cur = partial_derivative(cur, axis);
          rec(axis + 1, budget - k, cur);
        }
      };
  for (int an = 0; an <= N; ++an) rec(0, N - an, bessel_pow[static_cast<std::size_t>(an)]);

  double sup = 0.0;
  double x[kMaxDim];
  for (std::int64_t i = 0; i < g.total_cells(); ++i) {
    total.cell_center(i, x);
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
    double decay = std::pow(1.0 + std::sqrt(r2), N);
    double v = decay * total[static_cast<std::size_t>(i)] * std::pow(x[n - 1], g.nu);
    sup = std::max(sup, v);
  }
  phi.seminorm_cache[N] = sup;
  return sup;
}

// Fixed dictionary of even bump profiles, each divided by its own
// p_{N,nu} so membership in the family { p_{N,nu} <= 1 } is exact by
// construction.  Deterministic in (N, size, grid).
inline std::vector<TestFunction> grand_family(int N, int size,
                                              const HalfSpaceGrid& grid) {
  if (size < 1) throw std::invalid_argument("grand_family: size must be >= 1");
  std::vector<TestFunction> fam;
  for (int i = 0; i < size; ++i) {
    double w = grid.side() * (0.25 + 0.125 * (i / 2));
    bool smooth = (i % 2) == 1;
    TestFunction tf = make_test_function(
        "family" + std::to_string(i), grid,
        [w, smooth](const double* x, int n) {
          double v = 1.0;
          for (int d = 0; d < n; ++d) {
            double s = x[d] / w;
            double b = 1.0 - s * s;
            if (b <= 0.0) return 0.0;
            v *= smooth ? std::exp(-s * s / b) : b * b * b * b;
          }
          return v;
        },
        /*unit_mass=*/false);
    double p = seminorm_pN(tf, N);
    if (p > 0.0) {
      for (double& v : tf.profile.values) v /= p;
      tf.seminorm_cache.clear();
      tf.total_mass = weighted_integral(tf.profile);
    }
    fam.push_back(std::move(tf));
  }
  return fam;
}

// Normalized copy phi / p_{N,nu}(phi), admissible to append to a family.
inline TestFunction normalize_for_family(const TestFunction& phi, int N) {
  double p = seminorm_pN(phi, N);
  if (p == 0.0) return phi;
  TestFunction out;
  out.name = phi.name + "/pN";
  out.profile = phi.profile;
  for (double& v : out.profile.values) v /= p;
  out.total_mass = weighted_integral(out.profile);
  return out;
}

}  // namespace bhm
