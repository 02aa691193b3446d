// Constructive atomic decomposition: threshold level sets of the grand
// maximal function, Whitney covers by disjoint dyadic cubes, partitions
// of unity, weighted polynomial corrections, and the telescoped atoms
//   A^j_k = (f - c^j_k) xi^j_k
//         - sum_l (f - c^{j+1}_l) xi^{j+1}_l xi^j_k
//         + sum_l c_{k,l} xi^{j+1}_l
// with coefficients lambda_{j,k} = C 2^j |Q|_nu^{1/p}.

#pragma once

#include <array>
#include <cstdint>

#include "bhm/norms.hpp"

namespace bhm {

// ---------------------------------------------------------------------------
// level sets

using CellMask = std::vector<std::uint8_t>;  // 1 = cell belongs to the set

inline CellMask level_set(const GridFunction& mf, double delta) {
  CellMask mask(mf.size(), 0);
  for (std::size_t i = 0; i < mf.size(); ++i) {
    if (mf[i] < 0.0)
      throw std::invalid_argument("level_set: maximal function must be >= 0");
    mask[i] = mf[i] > delta ? 1 : 0;
  }
  return mask;
}

inline std::int64_t mask_count(const CellMask& mask) {
  std::int64_t c = 0;
  for (std::uint8_t v : mask) c += v;
  return c;
}

// ---------------------------------------------------------------------------
// Whitney cover

namespace detail {

// Distance between two axis-aligned boxes given per-axis gaps.
inline double box_gap_distance(const double* lo1, const double* hi1,
                               const double* lo2, const double* hi2, int n) {
  double d2 = 0.0;
  for (int d = 0; d < n; ++d) {
    double gap = std::max({0.0, lo2[d] - hi1[d], lo1[d] - hi2[d]});
    d2 += gap * gap;
  }
  return std::sqrt(d2);
}

}  // namespace detail

// Maximal dyadic cubes Q contained in O with l(Q) <= dist(Q, O^c),
// selected coarsest-first; the exterior of the grid box counts as
// complement.  Distances are box-to-box between cell boxes plus one mesh
// width, so the finest cells always qualify and the union is exactly O.
inline std::vector<DyadicCube> whitney_cover(const CellMask& mask,
                                             const HalfSpaceGrid& grid) {
  const int n = grid.dim;
  const std::int64_t m = grid.cells();
  const std::int64_t total = grid.total_cells();
  if (static_cast<std::int64_t>(mask.size()) != total)
    throw std::invalid_argument("whitney_cover: mask size does not match grid");
  GridFunction probe(grid);

  // cell boxes of the complement (interior complement cells only; the
  // exterior is handled by a closed-form distance)
  std::vector<std::array<double, 2 * kMaxDim>> compl_boxes;
  std::int64_t idx[kMaxDim];
  for (std::int64_t i = 0; i < total; ++i) {
    if (mask[static_cast<std::size_t>(i)]) continue;
    probe.unflat(i, idx);
    std::array<double, 2 * kMaxDim> b{};
    for (int d = 0; d < n; ++d) {
      b[d] = double(idx[d]) * grid.h;
      b[kMaxDim + d] = double(idx[d] + 1) * grid.h;
    }
    compl_boxes.push_back(b);
  }

  // per-cell distance to the complement (cell box to nearest complement
  // cell box, or to the box exterior)
  std::vector<double> cell_dist(static_cast<std::size_t>(total), 0.0);
  double side = grid.side();
  for (std::int64_t i = 0; i < total; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    probe.unflat(i, idx);
    double lo[kMaxDim], hi[kMaxDim];
    double best = 1e300;
    for (int d = 0; d < n; ++d) {
      lo[d] = double(idx[d]) * grid.h;
      hi[d] = double(idx[d] + 1) * grid.h;
      best = std::min({best, lo[d], side - hi[d]});  // exterior distance
    }
    for (const auto& b : compl_boxes)
      best = std::min(best,
                      detail::box_gap_distance(lo, hi, b.data(), b.data() + kMaxDim, n));
    cell_dist[static_cast<std::size_t>(i)] = best;
  }

  std::vector<std::uint8_t> covered(static_cast<std::size_t>(total), 0);
  std::vector<DyadicCube> out;
  double bound = 4.0 * std::sqrt(double(n));
  for (int level = -grid.box_level; level <= grid.finest_level(); ++level) {
    for (const DyadicCube& q : dyadic_cubes(level, grid)) {
      // cells of the cube
      std::int64_t lo[kMaxDim], hi[kMaxDim];
      for (int d = 0; d < n; ++d)
        detail::axis_cell_range(grid, q.lo(d), q.hi(d), lo[d], hi[d]);
      bool eligible = true;
      double dist = 1e300;
      std::int64_t it[kMaxDim];
      for (int d = 0; d < n; ++d) it[d] = lo[d];
      bool more = true;
      while (more && eligible) {
        std::int64_t flat = 0;
        for (int d = 0; d < n; ++d) flat = flat * m + it[d];
        if (!mask[static_cast<std::size_t>(flat)] ||
            covered[static_cast<std::size_t>(flat)])
          eligible = false;
        else
          dist = std::min(dist, cell_dist[static_cast<std::size_t>(flat)]);
        more = false;
        for (int d = n - 1; d >= 0; --d) {
          if (++it[d] < hi[d]) {
            more = true;
            break;
          }
          it[d] = lo[d];
        }
      }
      if (!eligible) continue;
      dist += grid.h;
      double l = q.side();
      if (l > dist) continue;
      if (dist > bound * l * (1.0 + 1e-12))
        throw std::logic_error("whitney_cover: upper distance bound violated");
      out.push_back(q);
      for (int d = 0; d < n; ++d) it[d] = lo[d];
      more = true;
      while (more) {
        std::int64_t flat = 0;
        for (int d = 0; d < n; ++d) flat = flat * m + it[d];
        covered[static_cast<std::size_t>(flat)] = 1;
        more = false;
        for (int d = n - 1; d >= 0; --d) {
          if (++it[d] < hi[d]) {
            more = true;
            break;
          }
          it[d] = lo[d];
        }
      }
    }
  }
  // the finest cells always satisfy the lower bound, so the cover is exact
  for (std::int64_t i = 0; i < total; ++i)
    if (mask[static_cast<std::size_t>(i)] != covered[static_cast<std::size_t>(i)])
      throw std::logic_error("whitney_cover: union does not equal the set");
  return out;
}

// ---------------------------------------------------------------------------
// partition of unity

// Bumps of product form subordinate to the rho-enlarged cubes (rho = 2:
// support inside 2Q subset 3Q), renormalized by their positive sum and
// zeroed off O, so the sum is the indicator of O up to roundoff in the
// division.
inline std::vector<GridFunction> partition_of_unity(
    const std::vector<DyadicCube>& cubes, const CellMask& mask,
    const HalfSpaceGrid& grid, double rho = 2.0) {
  if (!(rho > 1.0))
    throw std::invalid_argument("partition_of_unity: rho must exceed 1");
  const int n = grid.dim;
  const std::int64_t total = grid.total_cells();
  std::vector<GridFunction> xis;
  xis.reserve(cubes.size());
  GridFunction sum(grid);
  double x[kMaxDim];
  for (const DyadicCube& q : cubes) {
    GridFunction xi(grid);
    double half = 0.5 * rho * q.side();
    for (std::int64_t i = 0; i < total; ++i) {
      if (!mask[static_cast<std::size_t>(i)]) continue;
      xi.cell_center(i, x);
      double v = 1.0;
      for (int d = 0; d < n; ++d) {
        double c = 0.5 * (q.lo(d) + q.hi(d));
        double s = (x[d] - c) / half;
        double b = 1.0 - s * s;
        if (b <= 0.0) {
          v = 0.0;
          break;
        }
        v *= b * b;
      }
      xi[static_cast<std::size_t>(i)] = v;
    }
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += xi[i];
    xis.push_back(std::move(xi));
  }
  for (std::int64_t i = 0; i < total; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    if (sum[static_cast<std::size_t>(i)] <= 0.0)
      throw std::logic_error("partition_of_unity: point of O covered by no bump");
  }
  for (GridFunction& xi : xis)
    for (std::int64_t i = 0; i < total; ++i)
      if (mask[static_cast<std::size_t>(i)])
        xi[static_cast<std::size_t>(i)] /= sum[static_cast<std::size_t>(i)];
  return xis;
}

// ---------------------------------------------------------------------------
// weighted polynomial projection

struct LocalPoly {
  std::vector<std::array<int, kMaxDim>> alphas;
  std::vector<double> coeffs;
  std::array<double, kMaxDim> center{};
  std::array<double, kMaxDim> scale{};
  int degree = 0;

  bool zero() const { return coeffs.empty(); }

  double eval(const double* x, int n) const {
    double acc = 0.0;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      double m = 1.0;
      for (int d = 0; d < n; ++d) {
        double t = (x[d] - center[d]) / scale[d];
        for (int e = 0; e < alphas[a][d]; ++e) m *= t;
      }
      acc += coeffs[a] * m;
    }
    return acc;
  }
};

namespace detail {

inline std::vector<std::array<int, kMaxDim>> monomial_alphas(int n, int s) {
  std::vector<std::array<int, kMaxDim>> out;
  std::array<int, kMaxDim> a{};
  std::function<void(int, int)> rec = [&](int d, int left) {
    if (d == n) {
      out.push_back(a);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      a[d] = k;
      rec(d + 1, left - k);
    }
    a[d] = 0;
  };
  rec(0, s);
  return out;
}

}  // namespace detail

// Weighted least squares of f onto polynomials of total degree <= s under
// the measure xi(x) x_n^nu dx: all moments of (f - c) xi up to degree s
// vanish.  An ill-conditioned Gram matrix shrinks s with a warning.
inline LocalPoly local_poly_project(const GridFunction& f, const GridFunction& xi,
                                    int s, double nu,
                                    std::vector<std::string>* warnings = nullptr) {
  f.require_same_grid(xi, "local_poly_project");
  if (s < 0) throw std::invalid_argument("local_poly_project: s must be >= 0");
  const HalfSpaceGrid& g = f.grid;
  const int n = g.dim;
  std::vector<std::int64_t> cells;
  for (std::int64_t i = 0; i < g.total_cells(); ++i)
    if (xi[static_cast<std::size_t>(i)] != 0.0) cells.push_back(i);
  if (cells.empty())
    throw std::invalid_argument("local_poly_project: weight is identically zero");

  LocalPoly poly;
  double lo[kMaxDim], hi[kMaxDim], x[kMaxDim];
  for (int d = 0; d < n; ++d) {
    lo[d] = 1e300;
    hi[d] = -1e300;
  }
  for (std::int64_t i : cells) {
    f.cell_center(i, x);
    for (int d = 0; d < n; ++d) {
      lo[d] = std::min(lo[d], x[d]);
      hi[d] = std::max(hi[d], x[d]);
    }
  }
  for (int d = 0; d < n; ++d) {
    poly.center[d] = 0.5 * (lo[d] + hi[d]);
    poly.scale[d] = std::max(0.5 * (hi[d] - lo[d]), g.h);
  }

  double hn = std::pow(g.h, n);
  for (int deg = s; deg >= 0; --deg) {
    auto alphas = detail::monomial_alphas(n, deg);
    int k = static_cast<int>(alphas.size());
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    std::vector<double> basis(static_cast<std::size_t>(k));
    for (std::int64_t i : cells) {
      f.cell_center(i, x);
      double w = xi[static_cast<std::size_t>(i)] * std::pow(x[n - 1], nu) * hn;
      for (int a = 0; a < k; ++a) {
        double m = 1.0;
        for (int d = 0; d < n; ++d) {
          double t = (x[d] - poly.center[d]) / poly.scale[d];
          for (int e = 0; e < alphas[static_cast<std::size_t>(a)][d]; ++e) m *= t;
        }
        basis[static_cast<std::size_t>(a)] = m;
      }
      for (int a = 0; a < k; ++a) {
        for (int b = a; b < k; ++b)
          gram(a, b) += w * basis[static_cast<std::size_t>(a)] *
                        basis[static_cast<std::size_t>(b)];
        rhs(a) += w * basis[static_cast<std::size_t>(a)] *
                  f[static_cast<std::size_t>(i)];
      }
    }
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < a; ++b) gram(a, b) = gram(b, a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(k - 1);
    if (!(lmin > 0.0) || lmax / lmin > 1e12) {
      if (deg == 0) {
        // one positive diagonal entry; cannot be singular with cells present
        throw std::logic_error("local_poly_project: degenerate weight");
      }
      if (warnings)
        warnings->push_back("local_poly_project: ill-conditioned Gram, degree " +
                            std::to_string(deg) + " -> " + std::to_string(deg - 1));
      continue;
    }
    Eigen::VectorXd c = es.eigenvectors() *
                        (es.eigenvectors().transpose() * rhs).cwiseQuotient(
                            es.eigenvalues());
    poly.degree = deg;
    poly.alphas = std::move(alphas);
    poly.coeffs.assign(c.data(), c.data() + k);
    return poly;
  }
  throw std::logic_error("local_poly_project: unreachable");
}

// ---------------------------------------------------------------------------
// Calderon-Zygmund decomposition at one threshold

struct BadPart {
  GridFunction b;        // (f - c_k) xi_k
  DyadicCube cube;       // the Whitney cube; support of b is in its rho-fold
  GridFunction xi;
  LocalPoly c;
};

struct CZResult {
  GridFunction good;
  std::vector<BadPart> bad_parts;
  double threshold = 0.0;
  CellMask mask;
  std::vector<std::string> warnings;
};

inline CZResult cz_decompose(const GridFunction& f, const GridFunction& mf,
                             double delta, int s, double nu) {
  f.require_same_grid(mf, "cz_decompose");
  CZResult res;
  res.threshold = delta;
  res.mask = level_set(mf, delta);
  res.good = f;
  if (mask_count(res.mask) == 0) return res;
  std::vector<DyadicCube> cubes = whitney_cover(res.mask, f.grid);
  std::vector<GridFunction> xis = partition_of_unity(cubes, res.mask, f.grid);
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    BadPart part;
    part.cube = cubes[k];
    part.xi = std::move(xis[k]);
    part.c = local_poly_project(f, part.xi, s, nu, &res.warnings);
    part.b = GridFunction(f.grid);
    double x[kMaxDim];
    for (std::int64_t i = 0; i < f.grid.total_cells(); ++i) {
      double w = part.xi[static_cast<std::size_t>(i)];
      if (w == 0.0) continue;
      part.b.cell_center(i, x);
      part.b[static_cast<std::size_t>(i)] =
          (f[static_cast<std::size_t>(i)] - part.c.eval(x, f.grid.dim)) * w;
    }
    for (std::size_t i = 0; i < res.good.size(); ++i)
      res.good[i] -= part.b[i];
    res.bad_parts.push_back(std::move(part));
  }
  return res;
}

// ---------------------------------------------------------------------------
// atoms

struct Atom {
  DyadicCube cube;
  GridFunction values;
  double p = 1.0, q = 1.0;
  int s = 0;
  double nu = 0.0;
  int level_j = 0;  // the threshold exponent the atom came from
};

struct AtomReport {
  bool support_ok = false;
  bool size_ok = false;
  double moment_max = 0.0;
  double tol_mom = 0.0;
  bool pass = false;
};

inline double triple_weighted_volume(const DyadicCube& q, double nu,
                                     const HalfSpaceGrid& grid) {
  return weighted_volume(triple_cube(q), nu, grid);
}

inline AtomReport validate_atom(const Atom& a, double tol_factor = 1e-8) {
  AtomReport rep;
  const HalfSpaceGrid& g = a.values.grid;
  BoxRegion triple = triple_cube(a.cube);
  rep.support_ok = true;
  double x[kMaxDim];
  for (std::int64_t i = 0; i < g.total_cells(); ++i) {
    if (a.values[static_cast<std::size_t>(i)] == 0.0) continue;
    a.values.cell_center(i, x);
    if (!triple.contains(x, g.dim)) {
      rep.support_ok = false;
      break;
    }
  }
  double bound = std::pow(weighted_volume(a.cube, a.nu, g), -1.0 / a.p);
  rep.size_ok = a.values.max_abs() <= bound * (1.0 + 1e-12);
  rep.tol_mom =
      tol_factor * a.values.max_abs() * triple_weighted_volume(a.cube, a.nu, g);
  double hn = std::pow(g.h, g.dim);
  auto alphas = detail::monomial_alphas(g.dim, a.s);
  double c[kMaxDim], sc[kMaxDim];
  for (int d = 0; d < g.dim; ++d) {
    c[d] = 0.5 * (triple.lo[d] + triple.hi[d]);
    sc[d] = std::max(0.5 * (triple.hi[d] - triple.lo[d]), g.h);
  }
  rep.moment_max = 0.0;
  for (const auto& alpha : alphas) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < g.total_cells(); ++i) {
      double v = a.values[static_cast<std::size_t>(i)];
      if (v == 0.0) continue;
      a.values.cell_center(i, x);
      double m = 1.0;
      for (int d = 0; d < g.dim; ++d) {
        double t = (x[d] - c[d]) / sc[d];
        for (int e = 0; e < alpha[d]; ++e) m *= t;
      }
      acc += v * m * std::pow(x[g.dim - 1], a.nu) * hn;
    }
    rep.moment_max = std::max(rep.moment_max, std::abs(acc));
  }
  rep.pass = rep.support_ok && rep.size_ok && rep.moment_max <= rep.tol_mom;
  return rep;
}

// ---------------------------------------------------------------------------
// the full decomposition

struct Decomposition {
  std::vector<Atom> atoms;
  CoefficientList coefficients;
  int j_min = 0, j_max = 0;
  GridFunction residual;
  double empirical_C = 0.0;
  std::vector<std::string> warnings;
  std::int64_t max_overlap = 0;  // enlarged-cube overlap count across levels
};

// Smallest admissible moment degree for the atom condition.
inline int default_moment_degree(int n, double nu, double q) {
  double req = (double(n) + 1.0 + nu) * (1.0 / q - 1.0);
  int s = static_cast<int>(std::ceil(req));
  return std::max(0, s);
}

inline GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  a.require_same_grid(b, "multiply");
  GridFunction out(a.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

inline Decomposition atomic_decompose(const GridFunction& f,
                                      const NormParams& params, int s,
                                      int j_min, int j_max,
                                      const GridFunction& mf) {
  f.require_same_grid(mf, "atomic_decompose");
  if (j_max < j_min)
    throw std::invalid_argument("atomic_decompose: empty level range");
  const HalfSpaceGrid& g = f.grid;
  if (s < 0) s = default_moment_degree(g.dim, params.nu, params.q);
  Decomposition dec;
  dec.j_min = j_min;
  dec.j_max = j_max;

  std::vector<CZResult> cz;
  cz.reserve(static_cast<std::size_t>(j_max - j_min + 2));
  for (int j = j_min; j <= j_max + 1; ++j)
    cz.push_back(cz_decompose(f, mf, std::ldexp(1.0, j), s, params.nu));
  for (const CZResult& r : cz)
    dec.warnings.insert(dec.warnings.end(), r.warnings.begin(), r.warnings.end());

  // enlarged-cube overlap: max over cells of the per-level bump count
  for (const CZResult& r : cz) {
    if (r.bad_parts.empty()) continue;
    std::vector<std::int64_t> count(f.size(), 0);
    for (const BadPart& part : r.bad_parts)
      for (std::size_t i = 0; i < f.size(); ++i)
        if (part.xi[i] != 0.0) ++count[i];
    for (std::int64_t cnt : count) dec.max_overlap = std::max(dec.max_overlap, cnt);
  }

  struct RawAtom {
    GridFunction values;
    DyadicCube cube;
    int j;
    double sup;
  };
  std::vector<RawAtom> raw;
  double x[kMaxDim];
  for (int j = j_min; j <= j_max; ++j) {
    const CZResult& coarse = cz[static_cast<std::size_t>(j - j_min)];
    const CZResult& fine = cz[static_cast<std::size_t>(j - j_min + 1)];
    for (const BadPart& pk : coarse.bad_parts) {
      GridFunction A = pk.b;
      for (const BadPart& pl : fine.bad_parts) {
        // overlap of xi^j_k with xi^{j+1}_l
        GridFunction target(g);
        bool any = false;
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (pl.xi[i] == 0.0 || pk.xi[i] == 0.0) continue;
          any = true;
        }
        if (!any) continue;
        // subtract (f - c^{j+1}_l) xi^{j+1}_l xi^j_k and add back its
        // projection under the xi^{j+1}_l measure to restore the moments
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (pk.xi[i] == 0.0) continue;
          target.cell_center(static_cast<std::int64_t>(i), x);
          target[i] = (f[i] - pl.c.eval(x, g.dim)) * pk.xi[i];
        }
        LocalPoly ckl =
            local_poly_project(target, pl.xi, s, params.nu, &dec.warnings);
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (pl.xi[i] == 0.0) continue;
          A.cell_center(static_cast<std::int64_t>(i), x);
          A[i] -= target[i] * pl.xi[i];
          A[i] += ckl.eval(x, g.dim) * pl.xi[i];
        }
      }
      double sup = A.max_abs();
      // telescoping cancels exactly in exact arithmetic where the two levels
      // agree; discard atoms that are pure cancellation roundoff
      if (sup <= 1e-12 * f.max_abs()) continue;
      // smallest dyadic ancestor of the Whitney cube whose triple holds
      // the computed support
      DyadicCube q = pk.cube;
      while (true) {
        BoxRegion triple = triple_cube(q);
        bool ok = true;
        for (std::size_t i = 0; i < A.size() && ok; ++i) {
          if (A[i] == 0.0) continue;
          A.cell_center(static_cast<std::int64_t>(i), x);
          if (!triple.contains(x, g.dim)) ok = false;
        }
        if (ok || q.level <= -g.box_level) break;
        q = parent_cube(q);
      }
      raw.push_back(RawAtom{std::move(A), q, j, sup});
    }
  }

  // minimal C making every size condition hold
  double C = 0.0;
  for (const RawAtom& r : raw)
    C = std::max(C, r.sup / std::ldexp(1.0, r.j));
  C *= 1.0 + 1e-14;  // headroom so the argmax atom passes its own bound
  dec.empirical_C = C;

  GridFunction sum(g);
  for (RawAtom& r : raw) {
    double lambda = C * std::ldexp(1.0, r.j) *
                    std::pow(weighted_volume(r.cube, params.nu, g), 1.0 / params.p);
    Atom atom;
    atom.cube = r.cube;
    atom.p = params.p;
    atom.q = params.q;
    atom.s = s;
    atom.nu = params.nu;
    atom.level_j = r.j;
    atom.values = std::move(r.values);
    for (double& v : atom.values.values) v /= lambda;
    for (std::size_t i = 0; i < sum.size(); ++i)
      sum[i] += lambda * atom.values[i];
    dec.coefficients.entries.push_back({lambda, atom.cube});
    dec.atoms.push_back(std::move(atom));
  }
  dec.residual = GridFunction(g);
  for (std::size_t i = 0; i < f.size(); ++i) dec.residual[i] = f[i] - sum[i];
  return dec;
}

// Sum of the atomic series plus the residual, in the stored atom order.
inline GridFunction reconstruct(const Decomposition& dec) {
  GridFunction out = dec.residual;
  for (std::size_t a = 0; a < dec.atoms.size(); ++a) {
    double lambda = dec.coefficients.entries[a].lambda;
    const GridFunction& v = dec.atoms[a].values;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += lambda * v[i];
  }
  return out;
}

struct ReconstructionError {
  double rel_l2 = 0.0;
  double rel_linf = 0.0;
};

inline ReconstructionError reconstruction_error(const Decomposition& dec,
                                                const GridFunction& f) {
  GridFunction r = reconstruct(dec);
  f.require_same_grid(r, "reconstruction_error");
  GridFunction diff(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) diff[i] = r[i] - f[i];
  ReconstructionError err;
  double denom2 = lebesgue_norm(f, 2.0, f.grid.nu);
  double denomi = f.max_abs();
  err.rel_l2 = denom2 > 0.0 ? lebesgue_norm(diff, 2.0, f.grid.nu) / denom2 : 0.0;
  err.rel_linf = denomi > 0.0 ? diff.max_abs() / denomi : 0.0;
  return err;
}

}  // namespace bhm
