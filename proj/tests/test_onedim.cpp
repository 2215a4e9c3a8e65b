#include <gtest/gtest.h>

#include "mmsplit/onedim.hpp"
#include "test_support.hpp"

using namespace mmsplit;
using testsupport::pt;

namespace {

GammaSet curve_gamma(const std::vector<double>& ts) {
  std::vector<ProductPoint> pts;
  for (double t : ts) pts.push_back(scalar_tuple({t, t * t * t, std::pow(t, 5)}));
  return GammaSet(pts);
}

// Exact value of int_0^a coef * t^(num/den) dt for odd num, den.
double power_integral(double coef, int num, int den, double a) {
  const double p = double(num) / den;
  return coef * std::pow(std::abs(a), p + 1.0) / (p + 1.0);
}

}  // namespace

TEST(Bijection, NamedMaps) {
  EXPECT_DOUBLE_EQ(MonotoneBijection::named("cube")(2.0), 8.0);
  EXPECT_DOUBLE_EQ(MonotoneBijection::named("fifth")(-1.0), -1.0);
  EXPECT_NEAR(MonotoneBijection::named("cbrt")(-8.0), -2.0, 1e-15);
  EXPECT_NEAR(MonotoneBijection::named("5/3")(8.0), 32.0, 1e-12);
  EXPECT_DOUBLE_EQ(MonotoneBijection::named("identity")(3.5), 3.5);
  EXPECT_THROW(MonotoneBijection::named("square"), Error);
  EXPECT_THROW(MonotoneBijection::named("2/3"), Error);
  EXPECT_THROW(MonotoneBijection::named("3/"), Error);
}

TEST(Bijection, RejectsBadMaps) {
  EXPECT_THROW(MonotoneBijection([](double t) { return t + 1.0; }), Error);
  EXPECT_THROW(MonotoneBijection([](double t) { return t * t; }), Error);
  EXPECT_THROW(MonotoneBijection::power(3, 1, -1.0), Error);
}

TEST(Bijection, InverseToFullPrecision) {
  const auto cube = MonotoneBijection::power(3, 1);
  EXPECT_NEAR(cube.inverse(27.0), 3.0, 1e-15);
  EXPECT_NEAR(cube.inverse(-0.125), -0.5, 1e-15);
  EXPECT_EQ(cube.inverse(0.0), 0.0);
  EXPECT_NEAR(cube.inverse(1e30), 1e10, 1e-5);
  const auto sat = MonotoneBijection([](double t) { return std::atan(t); }, "atan");
  try {
    sat.inverse(2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InversionFailure);
  }
}

TEST(Quadrature, PolynomialsAndRoots) {
  const auto q = integrate_from_zero([](double t) { return t * t * t; }, {-2.0, 0.0, 1.0, 2.0});
  EXPECT_NEAR(q.values[0], 4.0, 1e-12);
  EXPECT_EQ(q.values[1], 0.0);
  EXPECT_NEAR(q.values[2], 0.25, 1e-12);
  EXPECT_NEAR(q.values[3], 4.0, 1e-12);
  const auto r = integrate_from_zero([](double t) { return std::cbrt(t); }, {1.0, -1.0, 8.0});
  EXPECT_NEAR(r.values[0], 0.75, 1e-9);
  EXPECT_NEAR(r.values[1], 0.75, 1e-9);
  EXPECT_NEAR(r.values[2], 12.0, 1e-9);
  EXPECT_LT(r.error_estimate, 1e-9);
}

TEST(CurvePotentials, KnottSmithAtOne) {
  const auto cp = curve_potentials(knott_smith_alphas(), {0.0, 1.0});
  EXPECT_NEAR(cp.potentials[0](pt({1})), 5.0 / 12.0, 1e-8);
  for (const auto& u : cp.potentials) EXPECT_EQ(u(pt({0})), 0.0);
}

TEST(CurvePotentials, IdentityPairGivesHalfSquare) {
  const auto id = MonotoneBijection::identity();
  const auto cp = curve_potentials({id, id}, {-2.0, -0.5, 0.0, 3.0});
  for (const auto& u : cp.potentials)
    for (double x : {-2.0, -0.5, 0.0, 3.0}) EXPECT_NEAR(u(pt({x})), 0.5 * x * x, 1e-12);
}

TEST(CurvePotentials, MatchKnottSmithClosedForms) {
  std::vector<double> grid;
  for (int k = -15; k <= 15; ++k) grid.push_back(0.1 * k);
  const auto cp = curve_potentials(knott_smith_alphas(), grid);
  const auto forms = knott_smith_closed_forms();
  for (std::size_t i = 0; i < 3; ++i)
    for (double x : grid) EXPECT_NEAR(cp.potentials[i](pt({x})), forms[i](pt({x})), 1e-6) << i << " " << x;
}

TEST(Young, CubeStrict) {
  const auto r = young_check(MonotoneBijection::named("cube"), 2.0, 1.0);
  EXPECT_DOUBLE_EQ(r.lhs, 2.0);
  EXPECT_NEAR(r.rhs, 4.75, 1e-9);
  EXPECT_FALSE(r.equality);
  EXPECT_LT(r.lhs, r.rhs);
}

TEST(Young, IdentityDiagonal) {
  for (double a : {-1.5, 0.0, 2.0}) {
    const auto r = young_check(MonotoneBijection::identity(), a, a);
    EXPECT_TRUE(r.equality);
    EXPECT_NEAR(r.lhs, a * a, 1e-12);
    EXPECT_NEAR(r.rhs, a * a, 1e-12);
  }
}

TEST(Young, CubeEquality) {
  const auto r = young_check(MonotoneBijection::named("cube"), 1.0, 1.0);
  EXPECT_TRUE(r.equality);
  EXPECT_NEAR(r.lhs, 1.0, 1e-12);
  EXPECT_NEAR(r.rhs, 1.0, 1e-9);
}

TEST(Young, RandomPowersAgainstExactIntegrals) {
  std::mt19937_64 rng(17);
  const int odd[] = {1, 3, 5, 7};
  for (int trial = 0; trial < 50; ++trial) {
    const int num = odd[testsupport::rand_int(rng, 0, 3)];
    const int den = odd[testsupport::rand_int(rng, 0, 3)];
    const double coef = testsupport::rand_real(rng, 0.5, 2.0);
    const auto g = MonotoneBijection::power(num, den, coef);
    const double a = testsupport::rand_real(rng, -2, 2);
    const double b = testsupport::rand_real(rng, -2, 2);
    const auto r = young_check(g, a, b);
    const double exact = power_integral(coef, num, den, a) + power_integral(std::pow(coef, -double(den) / num), den, num, b);
    EXPECT_NEAR(r.rhs, exact, 1e-9) << num << "/" << den;
    EXPECT_GE(r.rhs - r.lhs, -1e-9);
    const auto eq = young_check(g, a, g(a));
    EXPECT_TRUE(eq.equality);
    EXPECT_NEAR(eq.lhs, eq.rhs, 1e-9) << num << "/" << den << " a=" << a;
  }
}

TEST(KnottSmith, SpotValues) {
  const auto one = knott_smith_potentials(1, 1, 1);
  EXPECT_NEAR(one.u[0], 5.0 / 12.0, 1e-15);
  EXPECT_NEAR(one.u[1], 9.0 / 8.0, 1e-15);
  EXPECT_NEAR(one.u[2], 35.0 / 24.0, 1e-15);
  EXPECT_NEAR(one.u[0] + one.u[1] + one.u[2], 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(one.c1, 3.0);
  EXPECT_NEAR(one.c1_slack, 0.0, 1e-12);
  EXPECT_NEAR(one.c3_slack, 0.0, 1e-12);

  const auto origin = knott_smith_potentials(0, 0, 0);
  for (double v : origin.u) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(origin.c1_slack, 0.0);

  const auto axis = knott_smith_potentials(1, 0, 0);
  EXPECT_EQ(axis.c1, 0.0);
  EXPECT_NEAR(axis.c1_slack, 5.0 / 12.0, 1e-15);
}

TEST(KnottSmith, C3GridEqualityOnlyOnCurve) {
  // The c3 inequality on the 41^3 grid over [-2, 2]^3.
  std::size_t equal = 0;
  double worst = kInfinity;
  for (int a = -20; a <= 20; ++a)
    for (int b = -20; b <= 20; ++b)
      for (int c = -20; c <= 20; ++c) {
        const auto v = knott_smith_potentials(0.1 * a, 0.1 * b, 0.1 * c);
        worst = std::min(worst, v.c3_slack);
        if (std::abs(v.c3_slack) <= 1e-9) {
          ++equal;
          const double t = 0.1 * a;
          EXPECT_NEAR(0.1 * b, t * t * t, 1e-12);
          EXPECT_NEAR(0.1 * c, std::pow(t, 5), 1e-12);
        }
      }
  EXPECT_GE(worst, -1e-9);
  // origin and +-(1, 1, 1) are the curve points on this grid
  EXPECT_EQ(equal, 3u);
}

TEST(Figure, CurveRows) {
  const auto fig = emit_curve_figure_data(knott_smith_alphas(), -1, 1, 3);
  ASSERT_EQ(fig.rows.size(), 3u);
  EXPECT_EQ(fig.header.size(), 1u + 3u + 6u);
  EXPECT_EQ(fig.header[0], "t");
  const double expect[3][3] = {{-1, -1, -1}, {0, 0, 0}, {1, 1, 1}};
  for (int r = 0; r < 3; ++r) {
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(fig.rows[r][1 + i], expect[r][i]);
    // pair columns (1,2), (1,3), (2,3)
    EXPECT_DOUBLE_EQ(fig.rows[r][4], expect[r][0]);
    EXPECT_DOUBLE_EQ(fig.rows[r][5], expect[r][1]);
    EXPECT_DOUBLE_EQ(fig.rows[r][8], expect[r][1]);
    EXPECT_DOUBLE_EQ(fig.rows[r][9], expect[r][2]);
  }
  EXPECT_EQ(emit_curve_figure_data(knott_smith_alphas(), -1.5, 1.5, 2).rows.size(), 2u);
  EXPECT_THROW(emit_curve_figure_data(knott_smith_alphas(), 0, 1, 1), Error);
}

TEST(Figure, IdentityColumnsCoincide) {
  const auto id = MonotoneBijection::identity();
  const auto fig = emit_curve_figure_data({id, id, id}, -2, 2, 9);
  for (const auto& row : fig.rows)
    for (double v : row) EXPECT_DOUBLE_EQ(v, row[0]);
  const auto csv = to_csv(fig);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
  EXPECT_EQ(csv.substr(0, 9), "t,x1,x2,x");
}

TEST(Characterize, ComonotoneAllTrue) {
  const GammaSet g({scalar_tuple({0, 0, 0}), scalar_tuple({1, 1, 2}), scalar_tuple({2, 3, 5})});
  for (auto which : {Classical::c1, Classical::c2, Classical::c3}) {
    const auto r = characterize_1d(g, which);
    EXPECT_TRUE(r.cyclic && r.c_monotone && r.projections_cyclic && r.projections_monotone && r.splitting &&
                r.antiderivatives);
    EXPECT_TRUE(r.all_agree());
    ASSERT_TRUE(r.certificate);
    EXPECT_TRUE(r.certificate->pass);
  }
}

TEST(Characterize, MixedSignsAllFalse) {
  const GammaSet g({scalar_tuple({0, 0, 0}), scalar_tuple({1, -1, 2})});
  const auto r = characterize_1d(g, Classical::c1);
  EXPECT_FALSE(r.cyclic || r.c_monotone || r.projections_cyclic || r.projections_monotone || r.splitting ||
               r.antiderivatives);
  ASSERT_TRUE(r.witness);
  EXPECT_GT(recheck_witness(*r.witness, classical_cost(Classical::c1, 3, 1)), 1e-9);
}

TEST(Characterize, CurveSamplesAllTrue) {
  const auto r = characterize_1d(curve_gamma({-1.5, -1, -0.5, 0, 0.5, 1, 1.5}), Classical::c1, 3);
  EXPECT_TRUE(r.all_agree());
  EXPECT_TRUE(r.cyclic && r.splitting);
}

TEST(Characterize, RejectsHigherDimensions) {
  const GammaSet g({ProductPoint({pt({0, 0}), pt({0, 0})})});
  try {
    characterize_1d(g, Classical::c1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotOneDimensional);
  }
}

TEST(Characterize, RandomInstancesConsistent) {
  std::mt19937_64 rng(23);
  int positive = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t N = static_cast<std::size_t>(testsupport::rand_int(rng, 2, 4));
    const auto size = static_cast<std::size_t>(testsupport::rand_int(rng, 1, 4));
    const GammaSet g(trial % 2 ? testsupport::random_comonotone_points(rng, N, size, 3)
                               : testsupport::random_1d_points(rng, N, size, 2));
    const auto r = characterize_1d(g, static_cast<Classical>(trial % 3), 3);
    EXPECT_TRUE(r.all_agree());
    positive += r.cyclic;
  }
  EXPECT_GT(positive, 30);
}
