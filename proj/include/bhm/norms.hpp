// Weighted Lebesgue, Morrey, Hardy-Morrey and coefficient-sequence norms.
//
// The Morrey norm takes the dyadic-cube form
//   sup_J |J|_nu^{1/p - 1/q} ||f||_{L^q_nu(J)}
// with the weighted measure in both the volume factor and the local norm;
// a variant with the unweighted volume factor sits behind a flag.

#pragma once

#include <optional>

#include "bhm/grid.hpp"
#include "bhm/maximal.hpp"

namespace bhm {

struct NormParams {
  double p = 1.0;
  double q = 1.0;
  double nu = 0.0;

  NormParams() = default;
  NormParams(double p_, double q_, double nu_) : p(p_), q(q_), nu(nu_) {
    if (!(p > 0.0) || !(q > 0.0) || !(q <= p))
      throw std::invalid_argument("NormParams: need 0 < q <= p < inf");
    if (nu < 0.0) throw std::invalid_argument("NormParams: nu must be >= 0");
  }
};

struct CoefficientEntry {
  double lambda = 0.0;
  DyadicCube cube;
};

struct CoefficientList {
  std::vector<CoefficientEntry> entries;
};

// (sum |f|^p x_n^nu h^n)^{1/p}, over one dyadic cube or the whole box.
inline double lebesgue_norm(const GridFunction& f, double p, double nu,
                            const std::optional<DyadicCube>& region = std::nullopt) {
  if (!(p > 0.0)) throw std::invalid_argument("lebesgue_norm: p must be > 0");
  const HalfSpaceGrid& g = f.grid;
  double hn = std::pow(g.h, g.dim);
  std::int64_t m = g.cells();
  std::int64_t lo[kMaxDim], hi[kMaxDim];
  if (region) {
    for (int d = 0; d < g.dim; ++d) {
      detail::axis_cell_range(g, region->lo(d), region->hi(d), lo[d], hi[d]);
      if (hi[d] == lo[d]) return 0.0;  // cube off the grid box
    }
  } else {
    for (int d = 0; d < g.dim; ++d) {
      lo[d] = 0;
      hi[d] = m;
    }
  }
  double acc = 0.0;
  std::int64_t idx[kMaxDim];
  for (int d = 0; d < g.dim; ++d) idx[d] = lo[d];
  bool more = true;
  while (more) {
    std::int64_t flat = 0;
    for (int d = 0; d < g.dim; ++d) flat = flat * m + idx[d];
    double v = std::abs(f[static_cast<std::size_t>(flat)]);
    if (v != 0.0)
      acc += std::pow(v, p) * std::pow(g.coord(idx[g.dim - 1]), nu) * hn;
    more = false;
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < hi[d]) {
        more = true;
        break;
      }
      idx[d] = lo[d];
    }
  }
  return std::pow(acc, 1.0 / p);
}

// sup over every dyadic cube of every admissible level.
inline double morrey_norm(const GridFunction& f, const NormParams& params,
                          bool weighted_volume_factor = true) {
  const HalfSpaceGrid& g = f.grid;
  if (params.nu != g.nu)
    throw std::invalid_argument("morrey_norm: params.nu does not match the grid");
  double expo = 1.0 / params.p - 1.0 / params.q;  // <= 0
  double best = 0.0;
  for (int level = -g.box_level; level <= g.finest_level(); ++level) {
    for (const DyadicCube& q : dyadic_cubes(level, g)) {
      double local = lebesgue_norm(f, params.q, params.nu, q);
      if (local == 0.0) continue;
      double vol = weighted_volume_factor
                       ? weighted_volume(q, params.nu, g)
                       : std::pow(q.side(), g.dim);
      best = std::max(best, std::pow(vol, expo) * local);
    }
  }
  return best;
}

// Morrey norm of the chosen maximal function.
inline double hardy_morrey_norm(const GridFunction& f, const NormParams& params,
                                const MaximalSpec& via,
                                bool weighted_volume_factor = true) {
  if (via.kind != MaximalKind::Radial && via.kind != MaximalKind::Grand &&
      via.kind != MaximalKind::Poisson)
    throw std::invalid_argument(
        "hardy_morrey_norm: via must be radial, grand or poisson");
  GridFunction mf = apply_maximal(f, via);
  return morrey_norm(mf, params, weighted_volume_factor);
}

// {sup_Q |Q|_nu^{q/p-1} sum_{j: Q_j subseteq Q} |Q_j|_nu^{1-q/p} |lambda_j|^q}^{1/q}
inline double coefficient_norm(const CoefficientList& coeffs,
                               const NormParams& params,
                               const HalfSpaceGrid& grid) {
  if (coeffs.entries.empty()) return 0.0;
  double r = 1.0 - params.q / params.p;  // >= 0
  std::vector<double> terms(coeffs.entries.size());
  for (std::size_t j = 0; j < coeffs.entries.size(); ++j) {
    const CoefficientEntry& e = coeffs.entries[j];
    terms[j] = std::pow(weighted_volume(e.cube, params.nu, grid), r) *
               std::pow(std::abs(e.lambda), params.q);
  }
  double best = 0.0;
  for (int level = -grid.box_level; level <= grid.finest_level(); ++level) {
    for (const DyadicCube& q : dyadic_cubes(level, grid)) {
      double s = 0.0;
      for (std::size_t j = 0; j < coeffs.entries.size(); ++j)
        if (q.contains_cube(coeffs.entries[j].cube)) s += terms[j];
      if (s == 0.0) continue;
      best = std::max(best,
                      std::pow(weighted_volume(q, params.nu, grid), -r) * s);
    }
  }
  return std::pow(best, 1.0 / params.q);
}

}  // namespace bhm
