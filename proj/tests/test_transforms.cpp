#include <gtest/gtest.h>

#include <cmath>

#include "gtd/errors.hpp"
#include "gtd/geometry.hpp"
#include "gtd/transforms.hpp"
#include "support.hpp"

using namespace gtd;

namespace {

SystemSpec synthetic(const std::string& relation, Point reference) {
  SystemDefinition def;
  def.id = "synthetic";
  def.potential_name = "phi";
  def.coords = {{"x", CoordRole::Extensive}, {"y", CoordRole::Extensive}};
  def.excluded = "x";
  def.relation = relation;
  def.reference = std::move(reference);
  return make_system(def);
}

}  // namespace

TEST(EquationsOfState, IdealEntropy) {
  const auto I = equations_of_state(catalog_system("ideal_s"), {1.0, 1.0});
  EXPECT_DOUBLE_EQ(I.values[0], 1.5);
  EXPECT_DOUBLE_EQ(I.values[1], 1.0);
}

TEST(EquationsOfState, VdwPressure) {
  const auto I = equations_of_state(catalog_system("vdw_s"), {2.0, 3.0});
  EXPECT_NEAR(I.values[1] / I.values[0], 2.0 / 3.0, 1e-15);
}

TEST(EquationsOfState, ConstantField) {
  const auto I = equations_of_state(synthetic("5", {1, 1}), {0.4, 2.0});
  EXPECT_EQ(I.values, (std::vector<double>{0.0, 0.0}));
}

TEST(PartialLegendre, IdealEnergyToHelmholtz) {
  for (Solve solve : {Solve::Auto, Solve::Numeric}) {
    const auto F = partial_legendre(catalog_system("ideal_u"), 0, solve);
    EXPECT_EQ(F.closed_form, solve == Solve::Auto);
    EXPECT_NEAR(evaluate(F.spec, Point{2.0 / 3.0, 1.0}), 1.0, 1e-10);
  }
}

TEST(PartialLegendre, VdwNumericMatchesClosedForm) {
  const auto u = catalog_system("vdw_u");
  const auto closed = partial_legendre(u, 0);
  const auto numeric = partial_legendre(u, 0, Solve::Numeric);
  EXPECT_EQ(closed.spec.id, "vdw_F");
  for (const auto& x : test::random_points(u, 20)) {
    const Point y = closed.forward(x);
    EXPECT_EQ(numeric.forward(x), y);
    const double expect = evaluate(closed.spec, y);
    EXPECT_NEAR(evaluate(numeric.spec, y), expect, 1e-10 * std::max(1.0, std::abs(expect)));
  }
}

TEST(PartialLegendre, NumericCurvatureMatchesClosedForm) {
  const auto u = catalog_system("vdw_u");
  const auto closed = partial_legendre(u, 0);
  const auto numeric = partial_legendre(u, 0, Solve::Numeric);
  for (const auto& x : test::random_points(u, 5)) {
    const Point y = closed.forward(x);
    const double R = curvature(closed.spec, y).ricci_scalar;
    EXPECT_NEAR(curvature(numeric.spec, y).ricci_scalar, R, 1e-6 * (1 + std::abs(R)));
  }
}

TEST(PartialLegendre, SlotOutOfRange) {
  try {
    partial_legendre(catalog_system("ideal_u"), 2);
    FAIL() << "expected InvalidArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(PartialLegendre, Involution) {
  const auto u = catalog_system("vdw_u");
  const auto once = partial_legendre(u, 0, Solve::Numeric);
  const auto twice = partial_legendre(once.spec, 0, Solve::Numeric);
  for (const auto& x : test::random_points(u, 10)) {
    const double back = evaluate(twice.spec, twice.forward(once.forward(x)));
    EXPECT_NEAR(back, evaluate(u, x), 1e-8 * std::max(1.0, std::abs(back)));
  }
}

TEST(PartialLegendre, ConstantFieldIsNotInvertible) {
  EXPECT_THROW(partial_legendre(synthetic("5", {1, 1}), 0, Solve::Numeric), InversionFailure);
}

TEST(TotalLegendre, IdealGibbsCurvatureMatches) {
  const auto u = catalog_system("ideal_u");
  for (Solve solve : {Solve::Auto, Solve::Numeric}) {
    const auto g = total_legendre(u, solve);
    for (const auto& x : test::random_points(u, 10)) {
      const double Ru = curvature(u, x).ricci_scalar;
      EXPECT_LE(std::abs(curvature(g.spec, g.forward(x)).ricci_scalar - Ru), 1e-6 * (1 + std::abs(Ru)));
    }
  }
}

TEST(TotalLegendre, VdwInvariance) {
  const auto u = catalog_system("vdw_u");
  const auto g = total_legendre(u, Solve::Numeric);
  // Below T_c = 8a/27b a given (T, P) has several volumes and the Gibbs
  // potential is multivalued; compare only where the map is one-to-one.
  std::size_t compared = 0;
  for (const auto& x : test::random_points(u, 40, 77)) {
    if (equations_of_state(u, x).values[0] <= 8.0 / 27.0) continue;
    ++compared;
    const double Ru = curvature(u, x).ricci_scalar;
    EXPECT_LE(std::abs(curvature(g.spec, g.forward(x)).ricci_scalar - Ru), 1e-6 * (1 + std::abs(Ru)));
  }
  EXPECT_GE(compared, 20u);
}

TEST(TotalLegendre, GibbsClosedFormValues) {
  const auto u = catalog_system("ideal_u");
  const auto closed = total_legendre(u);
  const auto numeric = total_legendre(u, Solve::Numeric);
  EXPECT_EQ(closed.spec.id, "ideal_g");
  for (const auto& x : test::random_points(u, 10)) {
    const Point y = closed.forward(x);
    // The numeric image is in (T, -P): the raw gradient of u.
    const Point yn = numeric.forward(x);
    EXPECT_DOUBLE_EQ(yn[0], y[0]);
    EXPECT_DOUBLE_EQ(yn[1], -y[1]);
    EXPECT_NEAR(evaluate(numeric.spec, yn), evaluate(closed.spec, y), 1e-10);
  }
}

TEST(TotalLegendre, AllIntensivePassesThrough) {
  const auto f = catalog_system("ising_f");
  const auto t = total_legendre(f);
  EXPECT_TRUE(t.passthrough);
  EXPECT_EQ(t.spec.id, f.id);
}

TEST(Inversion, IdealRoundTrip) {
  const auto s = catalog_system("ideal_s");
  for (Solve solve : {Solve::Auto, Solve::Numeric}) {
    const auto inv = invert_representation(s, 0, solve);
    for (const auto& x : test::random_points(s, 50)) {
      const Point y = inv.forward(x);
      EXPECT_LE(test::rel_diff(evaluate(inv.spec, y), x[0]), 1e-10);
    }
  }
}

TEST(Inversion, VdwMatchesEnergyForm) {
  const auto s = catalog_system("vdw_s");
  const auto u = catalog_system("vdw_u");
  const auto inv = invert_representation(s, 0, Solve::Numeric);
  for (const auto& x : test::random_points(s, 20)) {
    const Point y = inv.forward(x);
    EXPECT_LE(test::rel_diff(evaluate(inv.spec, y), evaluate(u, y)), 1e-10);
  }
}

TEST(Inversion, NonMonotone) {
  try {
    invert_representation(synthetic("x^2 + y", {0.3, 1.0}), 0, Solve::Numeric);
    FAIL() << "expected InversionFailure";
  } catch (const InversionFailure& e) {
    EXPECT_EQ(e.witness().size(), 2u);
  }
}

TEST(VolumePressure, VdwPressure) {
  const auto s = catalog_system("vdw_s");
  EXPECT_NEAR(to_vP(s, 2.0, 3.0).P, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(to_vP(s, 0.0, 3.0).P, 0.0);
  EXPECT_THROW(to_vP(s, 2.0, 1.0), DomainViolation);
  EXPECT_NEAR(vdw_energy_from_vP(3.0, 2.0 / 3.0, 1.0, 1.0), 2.0, 1e-14);
}

TEST(VolumePressure, ReducedVariables) {
  const auto c = reduced_variables(3.0, 1.0 / 27.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(c.v, 1.0);
  EXPECT_DOUBLE_EQ(c.P, 1.0);
  const auto r = reduced_variables(6.0, 2.0 / 27.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(r.v, 2.0);
  EXPECT_DOUBLE_EQ(r.P, 2.0);
  const auto back = from_reduced_variables(r.v, r.P, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(back.v, 6.0);
  EXPECT_DOUBLE_EQ(back.P, 2.0 / 27.0);
}

TEST(FirstLaw, IdealStraightPath) {
  std::vector<Point> path;
  for (int i = 0; i <= 1000; ++i) path.push_back({1.0 + i / 1000.0, 1.0 + i / 1000.0});
  EXPECT_LT(first_law_residual(catalog_system("ideal_s"), path), 1e-5);
}

TEST(FirstLaw, SinglePoint) { EXPECT_EQ(first_law_residual(catalog_system("ideal_s"), {{1.0, 1.0}}), 0.0); }

TEST(FirstLaw, CrossingCovolume) {
  std::vector<Point> path{{2.0, 3.0}, {2.0, 2.0}, {2.0, 0.5}};
  EXPECT_THROW(first_law_residual(catalog_system("vdw_s"), path), DomainViolation);
}
