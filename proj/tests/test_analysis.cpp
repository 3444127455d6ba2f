#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "gtd/analysis.hpp"
#include "gtd/errors.hpp"
#include "support.hpp"

using namespace gtd;

namespace {

ScalarFieldEvaluator field(const std::string& src) { return compile(parse_relation(src, {"x", "y"}, {}), {}); }

GridSpec reduced_line(double P_r, std::size_t count = 200) {
  return GridSpec{{{"v_r", 0.4, 3.0, count}, {"P_r", P_r, P_r, 1}}};
}

double locus_residual(const Point& reduced, double a, double b) {
  const auto vp = from_reduced_variables(reduced[0], reduced[1], a, b);
  return std::abs(2 * a * b - a * vp.v + vp.P * vp.v * vp.v * vp.v);
}

}  // namespace

TEST(Grid, ParseAxis) {
  const auto ax = GridAxis::parse("v_r=0.4:3:27");
  EXPECT_EQ(ax.name, "v_r");
  EXPECT_DOUBLE_EQ(ax.at(0), 0.4);
  EXPECT_DOUBLE_EQ(ax.at(26), 3.0);
  EXPECT_DOUBLE_EQ(ax.at(13), 1.7);
  for (const char* bad : {"v", "v=1:2", "v=1:2:x", "=1:2:3", "v=a:2:3", "v=1:2:-1"})
    EXPECT_THROW(GridAxis::parse(bad), Error) << bad;
}

TEST(Grid, FlatIndexRunsAlongFirstAxis) {
  GridSpec g{{{"x", 0, 1, 3}, {"y", 10, 20, 2}}};
  EXPECT_EQ(g.size(), 6u);
  EXPECT_EQ(g.line_count(), 2u);
  EXPECT_EQ(g.point(1), (Point{0.5, 10.0}));
  EXPECT_EQ(g.point(3), (Point{0.0, 20.0}));
  EXPECT_TRUE(GridSpec{}.empty());
}

TEST(Homogeneity, DegreeOne) {
  const auto r = homogeneity_degree(*field("x*y/(x + y)"), {1.0, 2.0}, {0.5, 2.0, 3.0});
  ASSERT_TRUE(r.is_homogeneous);
  EXPECT_NEAR(*r.degree, 1.0, 1e-12);
  EXPECT_LT(r.max_residual, 1e-12);
}

TEST(Homogeneity, DegreeThree) {
  const auto r = homogeneity_degree(*field("x^2*y"), {1.0, 2.0}, {0.5, 2.0, 3.0});
  ASSERT_TRUE(r.is_homogeneous);
  EXPECT_NEAR(*r.degree, 3.0, 1e-10);
  EXPECT_LT(r.max_residual, 1e-10);
}

TEST(Homogeneity, MolarIdealEntropyRejected) {
  const auto r = homogeneity_degree(catalog_system("ideal_s"), {2.0, 3.0});
  EXPECT_FALSE(r.is_homogeneous);
  EXPECT_FALSE(r.degree.has_value());
}

TEST(Homogeneity, ScaleStartIndependence) {
  for (const char* src : {"x*y/(x + y)", "x^2*y", "sqrt(x*y)"}) {
    const auto a = homogeneity_degree(*field(src), {1.0, 2.0});
    for (double lambda0 : {0.37, 4.0}) {
      const auto b = homogeneity_degree(*field(src), {lambda0, 2.0 * lambda0});
      ASSERT_TRUE(b.is_homogeneous);
      EXPECT_NEAR(*a.degree, *b.degree, 1e-10);
      EXPECT_LE(b.max_residual, 1e-10 * std::max(1.0, std::abs(field(src)->evaluate(Point{lambda0, 2 * lambda0}))));
    }
  }
}

TEST(Invariance, VdwEntropyVsEnergy) {
  const auto s = catalog_system("vdw_s"), u = catalog_system("vdw_u");
  const auto r = invariance_report(s, u, [&](const Point& x) { return Point{evaluate(s, x), x[1]}; },
                                   GridSpec{{{"u", 0.5, 5, 15}, {"v", 1.5, 6, 15}}});
  EXPECT_EQ(r.rows.size(), 225u);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_LT(r.max_rel_delta, 1e-6);
}

TEST(Invariance, IdealBothFlat) {
  const auto s = catalog_system("ideal_s"), u = catalog_system("ideal_u");
  const auto r = invariance_report(s, u, [&](const Point& x) { return Point{evaluate(s, x), x[1]}; },
                                   GridSpec{{{"u", 0.5, 5, 15}, {"v", 0.5, 5, 15}}});
  EXPECT_LT(r.max_abs_delta, 1e-8);
  for (const auto& row : r.rows) EXPECT_LT(std::abs(row.r_a), 1e-8);
}

TEST(Invariance, VdwHelmholtzDiffers) {
  const auto u = catalog_system("vdw_u");
  const auto F = partial_legendre(u, 0);
  const auto r = invariance_report(u, F.spec, F.forward, GridSpec{{{"s", -1, 3, 15}, {"v", 1.5, 6, 15}}});
  EXPECT_GT(r.max_abs_delta, 0.1);
}

TEST(Scan, VdwLineAtPointEight) {
  const auto s = catalog_system("vdw_s");
  const auto view = vdw_pressure_view(s, true);
  ScanOptions options;
  options.locus = VdwLocus{1.0, 1.0, true};
  const auto report = singularity_scan(view, reduced_line(0.8), options);
  ASSERT_EQ(report.singular.size(), 2u);
  const auto roots = vdw_locus_volumes(from_reduced_variables(1.0, 0.8, 1.0, 1.0).P, 1.0, 1.0);
  ASSERT_EQ(roots.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_TRUE(report.singular[i].on_locus);
    EXPECT_NEAR(report.singular[i].at[0], roots[i] / 3.0, 1e-4);
  }
  EXPECT_LE(report.max_locus_deviation, 1e-4);
}

TEST(Scan, EveryVdwDetectionSatisfiesLocus) {
  for (const char* id : {"vdw_s", "vdw_u"}) {
    const auto view = vdw_pressure_view(catalog_system(id), true);
    ScanOptions options;
    options.locus = VdwLocus{1.0, 1.0, true};
    const auto report = singularity_scan(view, GridSpec{{{"v_r", 0.4, 3, 150}, {"P_r", 0.6, 0.95, 3}}}, options);
    EXPECT_EQ(report.singular.size(), 6u) << id;
    for (const auto& sp : report.singular) EXPECT_LE(locus_residual(sp.at, 1.0, 1.0), 1e-3) << id;
  }
}

TEST(Scan, HelmholtzHasNoDetections) {
  const auto view = vdw_pressure_view(catalog_system("vdw_F"), true);
  ScanOptions options;
  options.locus = VdwLocus{1.0, 1.0, true};
  EXPECT_TRUE(singularity_scan(view, reduced_line(0.8), options).singular.empty());
}

TEST(Scan, IdealGasHasNoDetections) {
  const auto report =
      singularity_scan(direct_view(catalog_system("ideal_s")), GridSpec{{{"u", 0.5, 5, 30}, {"v", 0.5, 5, 30}}});
  EXPECT_TRUE(report.singular.empty());
  EXPECT_EQ(report.failures, 0u);
}

TEST(Scan, IsingHasNoDetections) {
  const auto report =
      singularity_scan(direct_view(catalog_system("ising_f")), GridSpec{{{"T", 0.2, 10, 99}, {"H", 0.5, 2, 4}}});
  EXPECT_TRUE(report.singular.empty());
  // |R| falls monotonically from the low-T edge; past T = 1 it passes
  // through zero on its way to the plateau.
  for (std::size_t line = 0; line < 4; ++line)
    for (std::size_t i = 1; report.samples[line * 99 + i].at[0] <= 1.0; ++i)
      EXPECT_GT(std::abs(report.samples[line * 99 + i - 1].ricci_scalar), std::abs(report.samples[line * 99 + i].ricci_scalar))
          << "H line " << line << " T index " << i;
}

TEST(Scan, DeterministicAcrossWorkerCounts) {
  const auto view = vdw_pressure_view(catalog_system("vdw_u"), true);
  const GridSpec grid{{{"v_r", 0.4, 3, 120}, {"P_r", 0.6, 0.95, 4}}};
  ScanOptions options;
  options.locus = VdwLocus{1.0, 1.0, true};
  setenv("GEOTHERMO_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1u);
  const auto one = singularity_scan(view, grid, options);
  setenv("GEOTHERMO_THREADS", "7", 1);
  EXPECT_EQ(worker_count(), 7u);
  const auto many = singularity_scan(view, grid, options);
  unsetenv("GEOTHERMO_THREADS");
  ASSERT_EQ(one.samples.size(), many.samples.size());
  for (std::size_t i = 0; i < one.samples.size(); ++i) {
    EXPECT_EQ(std::memcmp(&one.samples[i].ricci_scalar, &many.samples[i].ricci_scalar, sizeof(double)), 0);
    EXPECT_EQ(one.samples[i].failed, many.samples[i].failed);
  }
  ASSERT_EQ(one.singular.size(), many.singular.size());
  for (std::size_t i = 0; i < one.singular.size(); ++i) EXPECT_EQ(one.singular[i].at, many.singular[i].at);
}

TEST(Scan, EmptyGrid) { EXPECT_THROW(singularity_scan(direct_view(catalog_system("ideal_s")), GridSpec{}), Error); }

TEST(Locus, RootsOfCubic) {
  const double P = 0.8 / 27.0;
  const auto roots = vdw_locus_volumes(P, 1.0, 1.0);
  ASSERT_EQ(roots.size(), 2u);
  for (double v : roots) {
    EXPECT_GT(v, 1.0);
    EXPECT_NEAR(P * v * v * v - v + 2.0, 0.0, 1e-12);
  }
  EXPECT_LT(roots[0], roots[1]);
}

TEST(LocusNumerator, CriticalPoint) {
  const auto r = locus_numerator_check(1.0, 1.0, {{3.0, 1.0 / 27.0}});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].numerator, 4.0, 1e-12);
  EXPECT_TRUE(r[0].finite);
  EXPECT_FALSE(r[0].vanishes);
}

TEST(LocusNumerator, DoubleFactorVanishes) {
  // v = 2 is on the locus for P = 0: 2 - 2 + 0 = 0.
  const auto r = locus_numerator_check(1.0, 1.0, {{2.0, 0.0}});
  EXPECT_NEAR(r[0].numerator, 0.0, 1e-12);
  EXPECT_TRUE(r[0].vanishes);
}

TEST(LocusNumerator, OffLocus) {
  try {
    locus_numerator_check(1.0, 1.0, {{3.0, 0.1}});
    FAIL() << "expected PreconditionFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionFailure);
  }
}

TEST(ConstantCurvature, Chaplygin) {
  const GridSpec grid{{{"u", 0.5, 5, 10}, {"v", 0.5, 5, 10}}};
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto r = constant_curvature_check(catalog_system("chap_s", {{"alpha", alpha}, {"beta", alpha}}), grid);
    EXPECT_NEAR(r.mean, -(1 + alpha) * (1 + alpha) / (2 * alpha), 1e-10);
    EXPECT_LT(r.spread, 1e-8);
    EXPECT_EQ(r.count, 100u);
  }
}

TEST(ConstantCurvature, VdwIsNotConstant) {
  const auto r = constant_curvature_check(catalog_system("vdw_s"), GridSpec{{{"u", 0.5, 5, 10}, {"v", 1.5, 6, 10}}});
  EXPECT_GT(r.spread, 1e-3);
}

TEST(Degeneracy, ChaplyginSweep) {
  const GridSpec grid{{{"u", 0.5, 5, 6}, {"v", 0.5, 5, 6}}};
  const auto cells = degeneracy_sweep({0.0, 1.0}, {0.0, 1.0}, grid);
  ASSERT_EQ(cells.size(), 4u);
  for (const auto& c : cells) {
    if (c.alpha == 0.0 && c.beta == 0.0) {
      EXPECT_LT(c.min_abs_det, 1e-12);
      EXPECT_TRUE(c.all_degenerate);
    }
    if (c.alpha == 1.0 && c.beta == 1.0) EXPECT_GT(c.min_abs_det, 1e-6);
  }
}

TEST(Degeneracy, EmptyGrid) {
  try {
    degeneracy_sweep({0.0}, {0.0}, GridSpec{});
    FAIL() << "expected EmptyGrid";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyGrid);
  }
  EXPECT_THROW(degeneracy_sweep({}, {0.0}, GridSpec{{{"u", 1, 2, 2}, {"v", 1, 2, 2}}}), Error);
}

TEST(Ising, PlateauAtHighTemperature) {
  const auto c = ising_profile(1.0, {1.0}, 50, 100, 51)[0];
  double lo = c.R.front(), hi = c.R.front();
  for (double r : c.R) lo = std::min(lo, r), hi = std::max(hi, r);
  EXPECT_LT((hi - lo) / std::abs(c.plateau), 0.05);
}

TEST(Ising, GrowsAsTemperatureFalls) {
  const auto c = ising_profile(1.0, {1.0}, 0.2, 1.0, 81)[0];
  for (std::size_t i = 1; i < c.T.size(); ++i) EXPECT_GT(std::abs(c.R[i - 1]), std::abs(c.R[i])) << c.T[i];
  EXPECT_LT(c.growth_exponent, 0.0);
}

TEST(Ising, MatchesHighPrecisionValues) {
  // 50-digit evaluation of the Ricci scalar of the direct form.
  const std::pair<double, double> ref[] = {{0.2, 4.7076e16}, {0.3, 6.67e10}, {0.5, 1.129e6},
                                           {1.0, 149.496},   {1.6, 0.8593},  {3.0, -1.9425}};
  const auto f = catalog_system("ising_f");
  for (const auto& [T, R] : ref) EXPECT_LT(test::rel_diff(curvature(f, {T, 1.0}).ricci_scalar, R), 1e-3) << T;
}

TEST(Ising, FiniteDifferencePipelineAtUnitTemperature) {
  const auto f = catalog_system("ising_f");
  const Point x{1.0, 1.0};
  const double R = curvature(f, x).ricci_scalar;
  const double fd = curvature_from_jet(fd_jet(*f.field, x), x, f.excluded_index).ricci_scalar;
  EXPECT_TRUE(std::isfinite(R));
  EXPECT_LT(test::rel_diff(fd, R), 1e-3);
}

TEST(Ising, RejectsBadInput) {
  EXPECT_THROW(ising_profile(1.0, {1.0}, 0.01, 1.0, 10), Error);
  EXPECT_THROW(ising_profile(1.0, {0.0}, 0.2, 1.0, 10), Error);
}
