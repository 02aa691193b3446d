// Named deterministic test-function generators.  Every generator is even
// in x_n by construction (profiles depend on x_n^2 or live away from the
// boundary as functions of x_n); random_smooth is seeded and bit
// reproducible.

#pragma once

#include <random>

#include "bhm/decompose.hpp"

namespace bhm {

struct CorpusItem {
  std::string name;
  GridFunction f;
  std::map<std::string, double> metadata;  // mass, and a Lipschitz bound if known
};

namespace detail {

inline double poly_bump(const double* x, const double* c, const double* w, int n) {
  double v = 1.0;
  for (int d = 0; d < n; ++d) {
    double s = (x[d] - c[d]) / w[d];
    double b = 1.0 - s * s;
    if (b <= 0.0) return 0.0;
    v *= b * b * b * b;
  }
  return v;
}

inline double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace detail

inline CorpusItem generate_corpus_item(const std::string& spec,
                                       const HalfSpaceGrid& grid) {
  const int n = grid.dim;
  double side = grid.side();
  std::string name = spec;
  unsigned seed = 7;
  if (auto pos = spec.find(':'); pos != std::string::npos) {
    name = spec.substr(0, pos);
    seed = static_cast<unsigned>(std::stoul(spec.substr(pos + 1)));
  }
  CorpusItem item;
  item.name = spec;
  GridFunction f(grid);
  double x[kMaxDim], c[kMaxDim], w[kMaxDim];

  if (name == "gaussian_bump") {
    for (int d = 0; d < n; ++d) c[d] = 0.45 * side;
    double sigma = side / 8.0;
    for (std::int64_t i = 0; i < grid.total_cells(); ++i) {
      f.cell_center(i, x);
      double r2 = 0.0;
      for (int d = 0; d < n; ++d) {
        double t = x[d] - c[d];
        r2 += t * t;
      }
      f[static_cast<std::size_t>(i)] = std::exp(-0.5 * r2 / (sigma * sigma));
    }
    item.metadata["lipschitz"] = std::exp(-0.5) / sigma;
  } else if (name == "polynomial_bump") {
    for (int d = 0; d < n; ++d) {
      c[d] = 0.5 * side;
      w[d] = 0.3 * side;
    }
    for (std::int64_t i = 0; i < grid.total_cells(); ++i) {
      f.cell_center(i, x);
      f[static_cast<std::size_t>(i)] = detail::poly_bump(x, c, w, n);
    }
    item.metadata["lipschitz"] = 8.0 / (0.3 * side);
  } else if (name == "oscillatory_moment_free") {
    // a modulated bump with its low moments removed by the weighted
    // projection, so the result is orthogonal to low-degree polynomials
    for (int d = 0; d < n; ++d) {
      c[d] = 0.5 * side;
      w[d] = 0.35 * side;
    }
    GridFunction xi(grid), base(grid);
    for (std::int64_t i = 0; i < grid.total_cells(); ++i) {
      f.cell_center(i, x);
      double b = detail::poly_bump(x, c, w, n);
      xi[static_cast<std::size_t>(i)] = b;
      base[static_cast<std::size_t>(i)] = std::cos(8.0 * M_PI * x[0] / side);
    }
    int s = 2;
    LocalPoly proj = local_poly_project(base, xi, s, grid.nu);
    for (std::int64_t i = 0; i < grid.total_cells(); ++i) {
      double b = xi[static_cast<std::size_t>(i)];
      if (b == 0.0) continue;
      f.cell_center(i, x);
      f[static_cast<std::size_t>(i)] =
          (base[static_cast<std::size_t>(i)] - proj.eval(x, n)) * b;
    }
    item.metadata["moment_degree"] = s;
  } else if (name == "indicator_smoothed") {
    // indicator of the centered half-size cube with a 4h smoothed edge
    double ramp = 4.0 * grid.h;
    for (std::int64_t i = 0; i < grid.total_cells(); ++i) {
      f.cell_center(i, x);
      double v = 1.0;
      for (int d = 0; d < n; ++d) {
        double lo = 0.25 * side, hi = 0.75 * side;
        v *= detail::smoothstep((x[d] - lo) / ramp) *
             detail::smoothstep((hi - x[d]) / ramp);
      }
      f[static_cast<std::size_t>(i)] = v;
    }
    item.metadata["lipschitz"] = 1.5 / ramp;
  } else if (name == "random_smooth") {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uc(0.2, 0.8), uw(0.08, 0.25),
        ua(-1.0, 1.0);
    for (int bump = 0; bump < 6; ++bump) {
      for (int d = 0; d < n; ++d) {
        c[d] = uc(rng) * side;
        w[d] = uw(rng) * side;
      }
      double amp = ua(rng);
      for (std::int64_t i = 0; i < grid.total_cells(); ++i) {
        f.cell_center(i, x);
        f[static_cast<std::size_t>(i)] += amp * detail::poly_bump(x, c, w, n);
      }
    }
  } else {
    throw std::invalid_argument("generate_corpus_item: unknown generator " + name);
  }
  item.f = std::move(f);
  item.metadata["mass"] = weighted_integral(item.f);
  item.metadata["sup"] = item.f.max_abs();
  return item;
}

inline std::vector<CorpusItem> generate_corpus(const std::vector<std::string>& specs,
                                               const HalfSpaceGrid& grid) {
  std::vector<CorpusItem> out;
  out.reserve(specs.size());
  for (const std::string& s : specs) out.push_back(generate_corpus_item(s, grid));
  return out;
}

}  // namespace bhm
