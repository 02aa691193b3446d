// The six maximal operators over one evaluation engine.  Smoothed fields
// f (x) phi_t are computed once per (phi, t) and shared: the radial,
// nontangential, tangential and grand maximal functions are pointwise
// suprema of the same fields over nested candidate sets, which makes the
// constant-explicit chain inequalities exact as computed.

#pragma once

#include <optional>

#include "bhm/bessel.hpp"

namespace bhm {

enum class MaximalKind { HL, Radial, Nontangential, Tangential, Grand, Poisson };

inline MaximalKind maximal_kind_from_string(const std::string& s) {
  if (s == "hl") return MaximalKind::HL;
  if (s == "radial") return MaximalKind::Radial;
  if (s == "nontangential") return MaximalKind::Nontangential;
  if (s == "tangential") return MaximalKind::Tangential;
  if (s == "grand") return MaximalKind::Grand;
  if (s == "poisson") return MaximalKind::Poisson;
  throw std::invalid_argument("unknown maximal kind: " + s);
}

struct MaximalSpec {
  MaximalKind kind = MaximalKind::Radial;
  std::optional<TestFunction> phi;
  double lambda = 1.0;   // tangential damping exponent
  int N = 2;             // grand-maximal order
  ScaleSet scales;
  std::vector<TestFunction> family;
  double aperture = 1.0;
  int quad_nodes = kDefaultShiftNodes;
};

// Compute-once store of the smoothed fields f (x) phi_t, keyed by the
// test function's name and the scale.
struct FieldCache {
  GridFunction f;
  int quad_nodes = kDefaultShiftNodes;
  std::map<std::pair<std::string, double>, GridFunction> fields;

  explicit FieldCache(GridFunction fn, int nodes = kDefaultShiftNodes)
      : f(std::move(fn)), quad_nodes(nodes) {}

  const GridFunction& field(const TestFunction& phi, double t) {
    auto key = std::make_pair(phi.name, t);
    auto it = fields.find(key);
    if (it != fields.end()) return it->second;
    TestFunction pt = mollifier_rescale(phi, t);
    GridFunction conv = bessel_convolve(f, pt.profile, quad_nodes);
    return fields.emplace(key, std::move(conv)).first->second;
  }
};

namespace detail {

inline void require_scales(const ScaleSet& scales, const char* what) {
  if (scales.empty())
    throw std::invalid_argument(std::string(what) + ": empty scale set");
  for (double t : scales.scales)
    if (!(t > 0.0))
      throw std::invalid_argument(std::string(what) + ": scales must be positive");
}

}  // namespace detail

// M_nu: sup over r of the weighted ball average of the shifted |f|,
//   sup_r (1/|E(0,r)|_nu) \int_{E(0,r)} (T^y |f|)(x) y_n^nu dy,
// realized as the convolution of the normalized ball indicator with |f|.
inline GridFunction hl_maximal(const GridFunction& f, const ScaleSet& scales,
                               int quad_nodes = kDefaultShiftNodes) {
  detail::require_scales(scales, "hl_maximal");
  const HalfSpaceGrid& g = f.grid;
  GridFunction absf(g);
  for (std::size_t i = 0; i < f.size(); ++i) absf[i] = std::abs(f[i]);
  GridFunction out(g);
  bool any = false;
  double x[kMaxDim];
  for (double r : scales.scales) {
    BallSpec ball;
    ball.center.assign(g.dim, 0.0);
    ball.radius = r;
    GridFunction ind(g);
    double vol = 0.0, hn = std::pow(g.h, g.dim);
    for (std::int64_t i = 0; i < g.total_cells(); ++i) {
      ind.cell_center(i, x);
      if (!ball.contains(x, g.dim)) continue;
      ind[static_cast<std::size_t>(i)] = 1.0;
      vol += std::pow(x[g.dim - 1], g.nu) * hn;
    }
    if (vol == 0.0) continue;  // ball below the mesh: no candidates
    any = true;
    for (double& v : ind.values) v /= vol;
    GridFunction avg = bessel_convolve(ind, absf, quad_nodes);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::max(out[i], avg[i]);
  }
  if (!any)
    throw std::invalid_argument("hl_maximal: every scale is below the mesh");
  return out;
}

// M^0: sup over t of |f (x) phi_t| at the point itself.
inline GridFunction radial_maximal(FieldCache& cache, const TestFunction& phi,
                                   const ScaleSet& scales) {
  detail::require_scales(scales, "radial_maximal");
  GridFunction out(cache.f.grid);
  for (double t : scales.scales) {
    const GridFunction& fld = cache.field(phi, t);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::max(out[i], std::abs(fld[i]));
  }
  return out;
}

// M*: sup over t and over grid points y in the cone |x - y| < a t.
inline GridFunction nontangential_maximal(FieldCache& cache, const TestFunction& phi,
                                          const ScaleSet& scales,
                                          double aperture = 1.0) {
  detail::require_scales(scales, "nontangential_maximal");
  if (!(aperture > 0.0))
    throw std::invalid_argument("nontangential_maximal: aperture must be > 0");
  const HalfSpaceGrid& g = cache.f.grid;
  const int n = g.dim;
  const std::int64_t m = g.cells();
  GridFunction out(g);
  std::int64_t xi[kMaxDim], yi[kMaxDim];
  for (double t : scales.scales) {
    const GridFunction& fld = cache.field(phi, t);
    double rad = aperture * t;
    std::int64_t reach = static_cast<std::int64_t>(std::floor(rad / g.h)) + 1;
    for (std::int64_t xf = 0; xf < g.total_cells(); ++xf) {
      out.unflat(xf, xi);
      double best = out[static_cast<std::size_t>(xf)];
      std::int64_t lo[kMaxDim], hi[kMaxDim];
      for (int d = 0; d < n; ++d) {
        lo[d] = std::max<std::int64_t>(0, xi[d] - reach);
        hi[d] = std::min<std::int64_t>(m - 1, xi[d] + reach);
        yi[d] = lo[d];
      }
      bool more = true;
      while (more) {
        double d2 = 0.0;
        for (int d = 0; d < n; ++d) {
          double diff = double(xi[d] - yi[d]) * g.h;
          d2 += diff * diff;
        }
        if (d2 < rad * rad) {  // strict cone membership
          std::int64_t yf = 0;
          for (int d = 0; d < n; ++d) yf = yf * m + yi[d];
          best = std::max(best, std::abs(fld[static_cast<std::size_t>(yf)]));
        }
        more = false;
        for (int d = n - 1; d >= 0; --d) {
          if (++yi[d] <= hi[d]) {
            more = true;
            break;
          }
          yi[d] = lo[d];
        }
      }
      out[static_cast<std::size_t>(xf)] = best;
    }
  }
  return out;
}

// M^lambda: sup over t and all grid points y of
//   |f (x) phi_t(y)| (t / (|x-y| + t))^lambda.
inline GridFunction tangential_maximal(FieldCache& cache, const TestFunction& phi,
                                       double lambda, const ScaleSet& scales) {
  detail::require_scales(scales, "tangential_maximal");
  if (!(lambda > 0.0))
    throw std::invalid_argument("tangential_maximal: lambda must be > 0");
  const HalfSpaceGrid& g = cache.f.grid;
  const int n = g.dim;
  const std::int64_t m = g.cells();
  GridFunction out(g);
  // damping factor depends only on the index offset: tabulate it once per
  // scale over the offset lattice
  std::int64_t span = 2 * m - 1;
  std::int64_t offcells = 1;
  for (int d = 0; d < n; ++d) offcells *= span;
  std::vector<double> damp(static_cast<std::size_t>(offcells));
  std::int64_t xi[kMaxDim], yi[kMaxDim];
  for (double t : scales.scales) {
    for (std::int64_t of = 0; of < offcells; ++of) {
      std::int64_t r = of;
      double d2 = 0.0;
      for (int d = n - 1; d >= 0; --d) {
        double diff = double(r % span - (m - 1)) * g.h;
        r /= span;
        d2 += diff * diff;
      }
      damp[static_cast<std::size_t>(of)] =
          std::pow(t / (std::sqrt(d2) + t), lambda);
    }
    const GridFunction& fld = cache.field(phi, t);
    std::vector<double> absf(fld.size());
    for (std::size_t i = 0; i < fld.size(); ++i) absf[i] = std::abs(fld[i]);
    // walk y as an odometer and update the damp-table offset incrementally;
    // same products in the same order as the direct double loop
    std::int64_t stride[kMaxDim];
    stride[n - 1] = 1;
    for (int d = n - 2; d >= 0; --d) stride[d] = stride[d + 1] * span;
    const std::int64_t rows = g.total_cells() / m;
    for (std::int64_t xf = 0; xf < g.total_cells(); ++xf) {
      out.unflat(xf, xi);
      std::int64_t of = 0;
      for (int d = 0; d < n; ++d) {
        of = of * span + (xi[d] + m - 1);
        yi[d] = 0;
      }
      // along the last axis the damp-table offset decreases by one, so each
      // row is a contiguous reversed stretch of the table
      double b0 = out[static_cast<std::size_t>(xf)];
      double b1 = b0, b2 = b0, b3 = b0;
      for (std::int64_t row = 0; row < rows; ++row) {
        const double* a = absf.data() + row * m;
        const double* dmp = damp.data() + of;
        std::int64_t k = 0;
        for (; k + 4 <= m; k += 4) {
          b0 = std::max(b0, a[k] * dmp[-k]);
          b1 = std::max(b1, a[k + 1] * dmp[-(k + 1)]);
          b2 = std::max(b2, a[k + 2] * dmp[-(k + 2)]);
          b3 = std::max(b3, a[k + 3] * dmp[-(k + 3)]);
        }
        for (; k < m; ++k) b0 = std::max(b0, a[k] * dmp[-k]);
        for (int d = n - 2; d >= 0; --d) {
          if (++yi[d] < m) {
            of -= stride[d];
            break;
          }
          yi[d] = 0;
          of += stride[d] * (m - 1);
        }
      }
      out[static_cast<std::size_t>(xf)] =
          std::max(std::max(b0, b1), std::max(b2, b3));
    }
  }
  return out;
}

// M_{N,nu}: sup over the family and the scales of |f (x) phi_t| at x.
inline GridFunction grand_maximal(FieldCache& cache, int N,
                                  const std::vector<TestFunction>& family,
                                  const ScaleSet& scales) {
  detail::require_scales(scales, "grand_maximal");
  if (family.empty())
    throw std::invalid_argument("grand_maximal: empty family");
  for (const TestFunction& phi : family)
    if (seminorm_pN(phi, N) > 1.0 + 1e-12)
      throw std::invalid_argument("grand_maximal: family member " + phi.name +
                                  " violates the seminorm bound");
  GridFunction out(cache.f.grid);
  for (const TestFunction& phi : family)
    for (double t : scales.scales) {
      const GridFunction& fld = cache.field(phi, t);
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::max(out[i], std::abs(fld[i]));
    }
  return out;
}

// M_P: sup over t of |P_t (x) f|.
inline GridFunction poisson_maximal(const GridFunction& f, const ScaleSet& scales,
                                    int quad_nodes = kDefaultShiftNodes) {
  detail::require_scales(scales, "poisson_maximal");
  GridFunction out(f.grid);
  for (double t : scales.scales) {
    GridFunction pt = poisson_kernel(t, f.grid);
    GridFunction conv = bessel_convolve(pt, f, quad_nodes);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::max(out[i], std::abs(conv[i]));
  }
  return out;
}

// Convenience overloads building a one-shot cache.
inline GridFunction radial_maximal(const GridFunction& f, const TestFunction& phi,
                                   const ScaleSet& scales,
                                   int quad_nodes = kDefaultShiftNodes) {
  FieldCache c(f, quad_nodes);
  return radial_maximal(c, phi, scales);
}
inline GridFunction nontangential_maximal(const GridFunction& f,
                                          const TestFunction& phi,
                                          const ScaleSet& scales,
                                          double aperture = 1.0,
                                          int quad_nodes = kDefaultShiftNodes) {
  FieldCache c(f, quad_nodes);
  return nontangential_maximal(c, phi, scales, aperture);
}
inline GridFunction tangential_maximal(const GridFunction& f, const TestFunction& phi,
                                       double lambda, const ScaleSet& scales,
                                       int quad_nodes = kDefaultShiftNodes) {
  FieldCache c(f, quad_nodes);
  return tangential_maximal(c, phi, lambda, scales);
}
inline GridFunction grand_maximal(const GridFunction& f, int N,
                                  const std::vector<TestFunction>& family,
                                  const ScaleSet& scales,
                                  int quad_nodes = kDefaultShiftNodes) {
  FieldCache c(f, quad_nodes);
  return grand_maximal(c, N, family, scales);
}

inline GridFunction apply_maximal(const GridFunction& f, const MaximalSpec& spec) {
  switch (spec.kind) {
    case MaximalKind::HL:
      return hl_maximal(f, spec.scales, spec.quad_nodes);
    case MaximalKind::Radial:
      if (!spec.phi) throw std::invalid_argument("radial maximal requires phi");
      return radial_maximal(f, *spec.phi, spec.scales, spec.quad_nodes);
    case MaximalKind::Nontangential:
      if (!spec.phi)
        throw std::invalid_argument("nontangential maximal requires phi");
      return nontangential_maximal(f, *spec.phi, spec.scales, spec.aperture,
                                   spec.quad_nodes);
    case MaximalKind::Tangential:
      if (!spec.phi) throw std::invalid_argument("tangential maximal requires phi");
      return tangential_maximal(f, *spec.phi, spec.lambda, spec.scales,
                                spec.quad_nodes);
    case MaximalKind::Grand:
      return grand_maximal(f, spec.N, spec.family, spec.scales, spec.quad_nodes);
    case MaximalKind::Poisson:
      return poisson_maximal(f, spec.scales, spec.quad_nodes);
  }
  throw std::logic_error("apply_maximal: unreachable");
}

}  // namespace bhm
