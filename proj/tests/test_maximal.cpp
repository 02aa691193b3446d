#include <catch2/catch_amalgamated.hpp>

#include "bhm/maximal.hpp"

using namespace bhm;

namespace {

TestFunction small_bump(const HalfSpaceGrid& g, double c, double w,
                        const char* name = "phi") {
  return make_test_function(name, g, [c, w](const double* x, int n) {
    double v = 1.0;
    for (int d = 0; d < n; ++d) {
      double s = (x[d] - c) / w;
      double b = 1.0 - s * s;
      if (b <= 0.0) return 0.0;
      v *= b * b * b * b;
    }
    return v;
  });
}

}  // namespace

TEST_CASE("HL maximal of a constant is the constant in the interior") {
  HalfSpaceGrid g(1, 1.0 / 32.0, 2, 1.5);
  GridFunction f(g);
  for (double& v : f.values) v = 3.25;
  ScaleSet s;
  s.scales = {0.25, 0.125};
  GridFunction mf = hl_maximal(f, s, 16);
  for (std::int64_t i = 0; i < g.cells(); ++i) {
    double x = g.coord(i);
    if (x < 0.5 || x > g.side() - 0.5) continue;
    CHECK(mf[static_cast<std::size_t>(i)] == Catch::Approx(3.25).epsilon(1e-6));
  }
}

TEST_CASE("HL maximal of zero is zero and scales below the mesh are rejected") {
  HalfSpaceGrid g(1, 0.25, 2, 1.0);
  GridFunction z(g);
  ScaleSet s;
  s.scales = {1.0};
  GridFunction mz = hl_maximal(z, s);
  for (std::size_t i = 0; i < mz.size(); ++i) CHECK(mz[i] == 0.0);
  ScaleSet tiny;
  tiny.scales = {0.01};  // no cell center within |y| <= 0.01
  CHECK_THROWS_WITH(hl_maximal(z, tiny),
                    Catch::Matchers::ContainsSubstring("below the mesh"));
}

TEST_CASE("HL maximal matches the exhaustive (r, y) loop") {
  HalfSpaceGrid g(1, 0.125, 2, 2.0);  // 32 cells
  GridFunction f(g);
  f[7] = 1.0;  // single-cell mass
  f[20] = -0.5;
  ScaleSet s;
  s.scales = {1.0, 0.5, 0.25};
  int nodes = 8;
  GridFunction fast = hl_maximal(f, s, nodes);
  // oracle: for each r average the shifted |f| over ball cells directly
  GridFunction absf(g);
  for (std::size_t i = 0; i < f.size(); ++i) absf[i] = std::abs(f[i]);
  GridFunction oracle(g);
  for (double r : s.scales) {
    double vol = 0.0;
    std::vector<std::int64_t> cells;
    for (std::int64_t yi = 0; yi < g.cells(); ++yi) {
      double y = g.coord(yi);
      if (y * y <= r * r) {
        cells.push_back(yi);
        vol += std::pow(y, g.nu) * g.h;
      }
    }
    if (vol == 0.0) continue;
    GridFunction avg(g);
    for (std::int64_t yi : cells) {
      GridFunction sh = bessel_shift(absf, {g.coord(yi)}, nodes);
      double w = std::pow(g.coord(yi), g.nu) * g.h / vol;
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += w * sh[i];
    }
    for (std::size_t i = 0; i < avg.size(); ++i)
      oracle[i] = std::max(oracle[i], avg[i]);
  }
  double scale = oracle.max_abs();
  for (std::size_t i = 0; i < fast.size(); ++i)
    CHECK(fast[i] == Catch::Approx(oracle[i]).margin(1e-12 * scale));
}

TEST_CASE("radial maximal basics") {
  HalfSpaceGrid g(1, 1.0 / 32.0, 2, 1.5);
  TestFunction phi = default_mollifier(g);
  TestFunction f = small_bump(g, 2.0, 1.0, "f");
  ScaleSet s;
  s.scales = {0.5};
  SECTION("singleton scale set is the plain smoothed field") {
    GridFunction m = radial_maximal(f.profile, phi, s, 16);
    TestFunction pt = mollifier_rescale(phi, 0.5);
    GridFunction conv = bessel_convolve(f.profile, pt.profile, 16);
    for (std::size_t i = 0; i < m.size(); ++i)
      CHECK(m[i] == std::abs(conv[i]));
  }
  SECTION("zero input gives zero") {
    GridFunction z(g);
    GridFunction m = radial_maximal(z, phi, s, 16);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i] == 0.0);
  }
  SECTION("absolute homogeneity") {
    GridFunction m1 = radial_maximal(f.profile, phi, s, 16);
    GridFunction f3 = f.profile;
    for (double& v : f3.values) v *= -3.0;
    GridFunction m3 = radial_maximal(f3, phi, s, 16);
    for (std::size_t i = 0; i < m1.size(); ++i)
      CHECK(m3[i] == Catch::Approx(3.0 * m1[i]).epsilon(1e-13));
  }
}

TEST_CASE("nontangential maximal matches the exhaustive triple loop") {
  HalfSpaceGrid g(1, 0.25, 2, 1.0);  // 16 cells
  TestFunction phi = default_mollifier(g);
  TestFunction f = small_bump(g, 2.0, 1.2, "f");
  ScaleSet s;
  s.scales = {1.0, 0.5};
  int nodes = 8;
  FieldCache cache(f.profile, nodes);
  GridFunction fast = nontangential_maximal(cache, phi, s);
  // oracle over (t, y) with the same smoothed fields
  GridFunction oracle(g);
  for (double t : s.scales) {
    TestFunction pt = mollifier_rescale(phi, t);
    GridFunction fld = bessel_convolve(f.profile, pt.profile, nodes);
    for (std::int64_t xi = 0; xi < g.cells(); ++xi) {
      double best = oracle[static_cast<std::size_t>(xi)];
      for (std::int64_t yi = 0; yi < g.cells(); ++yi) {
        double d = std::abs(g.coord(xi) - g.coord(yi));
        if (d < t) best = std::max(best, std::abs(fld[static_cast<std::size_t>(yi)]));
      }
      oracle[static_cast<std::size_t>(xi)] = best;
    }
  }
  for (std::size_t i = 0; i < fast.size(); ++i)
    CHECK(fast[i] == oracle[i]);  // same field values, same max
}

TEST_CASE("tangential maximal matches the exhaustive loop and the chain holds") {
  HalfSpaceGrid g(2, 0.25, 1, 0.5);  // 8x8
  TestFunction phi = default_mollifier(g, 0.5);
  TestFunction f = small_bump(g, 1.0, 0.7, "f");
  ScaleSet s;
  s.scales = {1.0, 0.5};
  double lambda = 2.5;
  int nodes = 8;
  FieldCache cache(f.profile, nodes);
  GridFunction radial = radial_maximal(cache, phi, s);
  GridFunction nont = nontangential_maximal(cache, phi, s);
  GridFunction tang = tangential_maximal(cache, phi, lambda, s);
  GridFunction oracle(g);
  double x[2], y[2];
  for (double t : s.scales) {
    const GridFunction& fld = cache.field(phi, t);
    for (std::int64_t xi = 0; xi < g.total_cells(); ++xi) {
      oracle.cell_center(xi, x);
      double best = oracle[static_cast<std::size_t>(xi)];
      for (std::int64_t yi = 0; yi < g.total_cells(); ++yi) {
        oracle.cell_center(yi, y);
        double dx = x[0] - y[0], dy = x[1] - y[1];
        double dist = std::sqrt(dx * dx + dy * dy);
        double v = std::abs(fld[static_cast<std::size_t>(yi)]) *
                   std::pow(t / (dist + t), lambda);
        best = std::max(best, v);
      }
      oracle[static_cast<std::size_t>(xi)] = best;
    }
  }
  double scale = oracle.max_abs();
  for (std::size_t i = 0; i < tang.size(); ++i) {
    CHECK(tang[i] == Catch::Approx(oracle[i]).margin(1e-13 * scale));
    // chain: M0 <= M* <= 2^lambda M^lambda
    CHECK(radial[i] <= nont[i]);
    CHECK(nont[i] <= std::pow(2.0, lambda) * tang[i] * (1.0 + 1e-12));
  }
}

TEST_CASE("tangential maximal is monotone decreasing in lambda") {
  HalfSpaceGrid g(1, 0.25, 2, 1.0);
  TestFunction phi = default_mollifier(g);
  TestFunction f = small_bump(g, 2.0, 1.0, "f");
  ScaleSet s;
  s.scales = {1.0, 0.5};
  FieldCache cache(f.profile, 8);
  GridFunction t1 = tangential_maximal(cache, phi, 1.0, s);
  GridFunction t2 = tangential_maximal(cache, phi, 2.0, s);
  for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t2[i] <= t1[i]);
}

TEST_CASE("grand maximal") {
  HalfSpaceGrid g(1, 1.0 / 32.0, 2, 1.5);
  TestFunction f = small_bump(g, 2.0, 1.0, "f");
  ScaleSet s;
  s.scales = {0.5, 0.25};
  int N = 1;
  SECTION("singleton family reduces to the radial maximal of the member") {
    TestFunction unit = normalize_for_family(default_mollifier(g), N);
    FieldCache cache(f.profile, 16);
    GridFunction grand = grand_maximal(cache, N, {unit}, s);
    GridFunction radial = radial_maximal(cache, unit, s);
    for (std::size_t i = 0; i < grand.size(); ++i) CHECK(grand[i] == radial[i]);
  }
  SECTION("family members violating the seminorm bound are rejected") {
    TestFunction bad = default_mollifier(g);
    for (double& v : bad.profile.values) v *= 1e6;
    bad.seminorm_cache.clear();
    CHECK_THROWS_WITH(grand_maximal(f.profile, N, {bad}, s, 16),
                      Catch::Matchers::ContainsSubstring("seminorm bound"));
  }
  SECTION("normalization chain against the radial maximal") {
    TestFunction phi = default_mollifier(g);
    double p = seminorm_pN(phi, N);
    TestFunction unit = normalize_for_family(phi, N);
    FieldCache cache(f.profile, 16);
    GridFunction grand = grand_maximal(cache, N, {unit}, s);
    GridFunction radial = radial_maximal(cache, phi, s);
    for (std::size_t i = 0; i < radial.size(); ++i)
      CHECK(radial[i] <= p * grand[i] * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("poisson maximal") {
  HalfSpaceGrid g(1, 1.0 / 64.0, 3, 2.0);
  ScaleSet s;
  s.scales = {0.5, 0.25};
  SECTION("constant input is pinched near the constant at the unit scale") {
    // the kernel's power-law tail is truncated by the box, so the discrete
    // mass at t != 1 drifts by a few percent; at t = 1 the mass is 1 by
    // construction and the value is <= c everywhere, close to c inside
    GridFunction f(g);
    for (double& v : f.values) v = 2.0;
    ScaleSet unit;
    unit.scales = {1.0};
    GridFunction m = poisson_maximal(f, unit, 24);
    for (std::int64_t i = 0; i < g.cells(); ++i) {
      double x = g.coord(i);
      CHECK(m[static_cast<std::size_t>(i)] <= 2.0 * (1.0 + 1e-12));
      if (x < 3.0 || x > g.side() - 3.0) continue;
      CHECK(m[static_cast<std::size_t>(i)] >= 2.0 * 0.9);
    }
  }
  SECTION("zero gives zero, sublinearity holds") {
    GridFunction z(g);
    GridFunction mz = poisson_maximal(z, s, 8);
    for (std::size_t i = 0; i < mz.size(); ++i) CHECK(mz[i] == 0.0);
    TestFunction a = small_bump(g, 3.0, 1.0, "a");
    TestFunction b = small_bump(g, 5.0, 1.2, "b");
    GridFunction sum(g);
    for (std::size_t i = 0; i < sum.size(); ++i)
      sum[i] = a.profile[i] + b.profile[i];
    GridFunction ma = poisson_maximal(a.profile, s, 8);
    GridFunction mb = poisson_maximal(b.profile, s, 8);
    GridFunction msum = poisson_maximal(sum, s, 8);
    double scale = msum.max_abs();
    for (std::size_t i = 0; i < msum.size(); ++i)
      CHECK(msum[i] <= ma[i] + mb[i] + 1e-12 * scale);
  }
}

TEST_CASE("enlarging the scale set never decreases any maximal value") {
  HalfSpaceGrid g(1, 1.0 / 32.0, 2, 1.5);
  TestFunction phi = default_mollifier(g);
  TestFunction f = small_bump(g, 2.0, 1.0, "f");
  ScaleSet small;
  small.scales = {0.5};
  ScaleSet big;
  big.scales = {0.5, 0.25};
  FieldCache cache(f.profile, 16);
  GridFunction rs = radial_maximal(cache, phi, small);
  GridFunction rb = radial_maximal(cache, phi, big);
  GridFunction ns = nontangential_maximal(cache, phi, small);
  GridFunction nb = nontangential_maximal(cache, phi, big);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(rb[i] >= rs[i]);
    CHECK(nb[i] >= ns[i]);
  }
}

TEST_CASE("apply_maximal dispatches and validates") {
  HalfSpaceGrid g(1, 0.25, 2, 1.0);
  TestFunction f = small_bump(g, 2.0, 1.0, "f");
  MaximalSpec spec;
  spec.scales.scales = {1.0};
  spec.quad_nodes = 8;
  spec.kind = MaximalKind::Radial;
  CHECK_THROWS_AS(apply_maximal(f.profile, spec), std::invalid_argument);  // no phi
  spec.phi = default_mollifier(g);
  GridFunction r = apply_maximal(f.profile, spec);
  CHECK(r.max_abs() > 0.0);
  spec.kind = MaximalKind::HL;
  CHECK(apply_maximal(f.profile, spec).max_abs() > 0.0);
  CHECK(maximal_kind_from_string("tangential") == MaximalKind::Tangential);
  CHECK_THROWS_AS(maximal_kind_from_string("bogus"), std::invalid_argument);
}
