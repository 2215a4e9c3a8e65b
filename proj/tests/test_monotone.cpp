#include <gtest/gtest.h>

#include "mmsplit/monotone.hpp"
#include "mmsplit/quadratic.hpp"
#include "test_support.hpp"

using namespace mmsplit;
using testsupport::pt;

namespace {

const PairwiseCost kProduct = PairwiseCost::inner_product();

// Independent re-evaluation of a witness through a tuple oracle.
double witness_gain(const Witness& w, const testsupport::TupleFn& c) {
  double permuted = 0.0, diagonal = 0.0;
  const std::size_t N = w.permutations.size();
  for (std::size_t j = 0; j < w.tuples.size(); ++j) {
    std::vector<MarginalPoint> x(N);
    for (std::size_t i = 0; i < N; ++i) x[i] = w.tuples[w.permutations[i][j]][i];
    permuted += c(x);
    diagonal += c(w.tuples[j].parts());
  }
  return permuted - diagonal;
}

GammaSet counterexample_gamma(const std::vector<double>& lambdas) {
  const auto ce = counterexample_construct();
  std::vector<ProductPoint> pts{ce.point(0.0, 0.0)};
  for (double l : lambdas) pts.push_back(ce.point(l));
  return GammaSet(pts);
}

testsupport::TupleFn total_cost_fn(const CostSpec& spec) {
  return [spec](const std::vector<MarginalPoint>& x) { return spec(ProductPoint(x)); };
}

ClosedForm random_quadratic_shift(std::mt19937_64& rng) {
  QuadraticForm q;
  q.A = Matrix::Constant(1, 1, testsupport::rand_real(rng, -3, 3));
  q.b = Vector::Constant(1, testsupport::rand_real(rng, -3, 3));
  q.c = testsupport::rand_real(rng, -3, 3);
  return ClosedForm(q);
}

struct Verdicts {
  std::vector<bool> brute;
  bool c_monotone;
  bool projections;
  bool operator==(const Verdicts&) const = default;
};

Verdicts all_verdicts(const GammaSet& g, const CostSpec& spec, std::size_t max_n) {
  Verdicts v;
  for (std::size_t n = 2; n <= max_n; ++n) v.brute.push_back(is_n_c_monotone_bruteforce(g, spec, n).holds);
  v.c_monotone = is_c_monotone(g, spec).holds;
  v.projections = check_projection_condition(g, spec).holds;
  return v;
}

}  // namespace

TEST(BruteForce, SinglePointAlwaysHolds) {
  const GammaSet g({scalar_tuple({1, -2, 3})});
  const auto c1 = classical_cost(Classical::c1, 3, 1);
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_TRUE(is_n_c_monotone_bruteforce(g, c1, n).holds);
}

TEST(BruteForce, OriginAndV2Hold) {
  const auto ce = counterexample_construct();
  const GammaSet g({ce.point(0, 0), ce.v2});
  EXPECT_TRUE(is_n_c_monotone_bruteforce(g, classical_cost(Classical::c1, 3, 2), 2).holds);
}

TEST(BruteForce, AntitoneSwapFails) {
  const GammaSet g({scalar_tuple({0, 1}), scalar_tuple({1, 0})});
  const auto c1 = classical_cost(Classical::c1, 2, 1);
  const auto v = is_n_c_monotone_bruteforce(g, c1, 2);
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_DOUBLE_EQ(v.witness->diagonal_sum, 0.0);
  EXPECT_DOUBLE_EQ(v.witness->permuted_sum, 1.0);
  EXPECT_DOUBLE_EQ(recheck_witness(*v.witness, c1), 1.0);
  EXPECT_EQ(v.witness->permutations[0], (std::vector<std::size_t>{0, 1}));
}

TEST(BruteForce, Guards) {
  const GammaSet g({scalar_tuple({0, 1}), scalar_tuple({1, 0})});
  const auto c1 = classical_cost(Classical::c1, 2, 1);
  try {
    is_n_c_monotone_bruteforce(g, c1, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderTooLarge);
  }
  EXPECT_THROW(is_n_c_monotone_bruteforce(g, classical_cost(Classical::c1, 2, 2), 2), Error);
  EXPECT_THROW(is_n_c_monotone_bruteforce(g, c1, 0), Error);
}

TEST(CMonotone, DiagonalHolds) {
  std::vector<ProductPoint> pts;
  for (double t : {-2.0, 0.5, 3.0}) pts.push_back(ProductPoint({pt({t, -t}), pt({t, -t}), pt({t, -t})}));
  EXPECT_TRUE(is_c_monotone(GammaSet(pts), classical_cost(Classical::c1, 3, 2)).holds);
}

TEST(CMonotone, CounterexampleSamplesHold) {
  const auto g = counterexample_gamma({1, 2, 3, 4, 5});
  EXPECT_TRUE(is_c_monotone(g, classical_cost(Classical::c1, 3, 2)).holds);
}

TEST(CMonotone, AntitoneFails) {
  const GammaSet g({scalar_tuple({0, 1}), scalar_tuple({1, 0})});
  EXPECT_FALSE(is_c_monotone(g, classical_cost(Classical::c1, 2, 1)).holds);
}

TEST(TwoMarginal, IdentityGraphHolds) {
  std::vector<PointPair> pairs{{pt({-1}), pt({-1})}, {pt({0}), pt({0})}, {pt({1}), pt({1})}};
  EXPECT_TRUE(is_two_marginal_cyclically_monotone(pairs, kProduct).holds);
  EXPECT_FALSE(find_positive_cycle(pairs, kProduct));
}

TEST(TwoMarginal, AntitoneCycleGainOne) {
  std::vector<PointPair> pairs{{pt({0}), pt({1})}, {pt({1}), pt({0})}};
  const auto v = is_two_marginal_cyclically_monotone(pairs, kProduct);
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_DOUBLE_EQ(v.witness->gain(), 1.0);
  const auto cycle = find_positive_cycle(pairs, kProduct);
  ASSERT_TRUE(cycle);
  EXPECT_EQ(cycle->size(), 2u);
}

TEST(TwoMarginal, CounterexampleProjectionAtThreeFails) {
  std::vector<PointPair> pairs{{pt({0, 0}), pt({0, 0})}, {pt({1, 0}), pt({-1, -1})}};
  EXPECT_FALSE(is_two_marginal_cyclically_monotone(pairs, kProduct).holds);
}

TEST(Classical, Examples) {
  std::vector<PointPair> id{{pt({-1}), pt({-1})}, {pt({0}), pt({0})}, {pt({1}), pt({1})}};
  EXPECT_TRUE(is_pair_monotone_classical(id).holds);

  std::vector<PointPair> at3{{pt({0, 0}), pt({0, 0})}, {pt({1, 0}), pt({-1, -1})}};
  const auto v = is_pair_monotone_classical(at3);
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_NEAR(v.witness->gain(), 1.0, 1e-12);

  std::vector<PointPair> at19{{pt({0, 0}), pt({0, 0})}, {pt({0.1, 0.1}), pt({1.9, -2.5})}};
  const auto w = is_pair_monotone_classical(at19);
  ASSERT_FALSE(w.holds);
  EXPECT_NEAR(w.witness->gain(), 0.06, 1e-12);
}

TEST(SignCriterion, Examples) {
  EXPECT_TRUE(sign_criterion_1d(GammaSet({scalar_tuple({0, 0, 0}), scalar_tuple({1, 2, 3})})).holds);
  const auto bad = sign_criterion_1d(GammaSet({scalar_tuple({0, 0, 0}), scalar_tuple({1, -1, 2})}));
  ASSERT_FALSE(bad.holds);
  ASSERT_TRUE(bad.witness);
  EXPECT_GT(recheck_witness(*bad.witness, classical_cost(Classical::c1, 3, 1)), 1e-9);
  std::vector<ProductPoint> curve;
  for (double t : {-1.0, 0.0, 2.0}) curve.push_back(scalar_tuple({t, t * t * t, std::pow(t, 5)}));
  EXPECT_TRUE(sign_criterion_1d(GammaSet(curve)).holds);
  EXPECT_THROW(sign_criterion_1d(GammaSet({ProductPoint({pt({0, 0}), pt({0, 0})})})), Error);
}

TEST(SignCriterion, AgreesWithCMonotoneOnRandomSets) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const GammaSet g(testsupport::random_1d_points(rng, 3, testsupport::rand_int(rng, 1, 5), 2));
    EXPECT_EQ(sign_criterion_1d(g).holds, is_c_monotone(g, classical_cost(Classical::c1, 3, 1)).holds);
  }
}

TEST(ProjectionCondition, DiagonalHolds) {
  std::vector<ProductPoint> pts;
  for (double t : {-1.0, 0.0, 4.0}) pts.push_back(ProductPoint({pt({t, 1}), pt({t, 1}), pt({t, 1})}));
  const auto r = check_projection_condition(GammaSet(pts), classical_cost(Classical::c1, 3, 2));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.pairs.size(), 3u);
}

TEST(ProjectionCondition, CounterexampleFailsOnEveryPair) {
  const auto r = check_projection_condition(counterexample_gamma({-1, 0, 1.9, 3}), classical_cost(Classical::c1, 3, 2));
  EXPECT_FALSE(r.holds);
  for (const auto& [key, verdict] : r.pairs) EXPECT_FALSE(verdict.holds) << key.first << "," << key.second;
}

TEST(ProjectionCondition, KnottSmithSamplesHold) {
  std::vector<ProductPoint> pts;
  for (double t = -1.5; t <= 1.5; t += 0.25) pts.push_back(scalar_tuple({t, t * t * t, std::pow(t, 5)}));
  EXPECT_TRUE(check_projection_condition(GammaSet(pts), classical_cost(Classical::c1, 3, 1)).holds);
}

TEST(OptimalCoupling, Examples) {
  const auto c1 = classical_cost(Classical::c1, 2, 1);
  const std::vector<MarginalPoint> sorted{pt({-1}), pt({0}), pt({2})};
  const auto same = brute_force_optimal_coupling({sorted, sorted}, c1);
  EXPECT_TRUE(same.diagonal_optimal);
  EXPECT_EQ(same.permutations[1], (std::vector<std::size_t>{0, 1, 2}));

  const auto swapped = brute_force_optimal_coupling({{pt({0}), pt({1})}, {pt({1}), pt({0})}}, c1);
  EXPECT_DOUBLE_EQ(swapped.value, 1.0);
  EXPECT_EQ(swapped.permutations[1], (std::vector<std::size_t>{1, 0}));
  EXPECT_FALSE(swapped.diagonal_optimal);

  const auto c1_3 = classical_cost(Classical::c1, 3, 1);
  const auto single = brute_force_optimal_coupling({{pt({2})}, {pt({3})}, {pt({-1})}}, c1_3);
  EXPECT_DOUBLE_EQ(single.value, eval_total_cost(c1_3, scalar_tuple({2, 3, -1})));
}

// Property suites

TEST(Properties, CycleDetectionMatchesPermutationOracle) {
  std::mt19937_64 rng(101);
  int failing = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testsupport::rand_int(rng, 1, 6));
    const auto pairs = trial % 2 ? testsupport::random_pairs(rng, n, testsupport::rand_int(rng, 1, 2), 3)
                                 : testsupport::random_monotone_pairs(rng, n, 4);
    const bool expected = testsupport::oracle_cyclic_pairs(pairs, kProduct);
    const auto v = is_two_marginal_cyclically_monotone(pairs, kProduct);
    EXPECT_EQ(v.holds, expected) << "trial " << trial;
    failing += !expected;
    if (!v.holds) {
      ASSERT_TRUE(v.witness);
      EXPECT_GT(v.witness->gain(), 1e-9);
      const int d = static_cast<int>(pairs[0].first.size());
      EXPECT_GT(recheck_witness(*v.witness, two_marginal_spec(kProduct, d, d)), 1e-9);
    }
  }
  EXPECT_GT(failing, 20);
}

TEST(Properties, CycleDetectionMatchesBruteForceForEveryOrder) {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testsupport::rand_int(rng, 1, 6));
    const auto pairs = trial % 2 ? testsupport::random_pairs(rng, n, 1, 3) : testsupport::random_monotone_pairs(rng, n, 4);
    std::vector<ProductPoint> pts;
    for (const auto& [x, y] : pairs) pts.push_back(ProductPoint({x, y}));
    const GammaSet g(pts);
    const auto spec = two_marginal_spec(kProduct, 1, 1);
    const bool cyclic = is_two_marginal_cyclically_monotone(pairs, kProduct).holds;
    bool all_orders = true;
    for (std::size_t k = 2; k <= g.size(); ++k) all_orders = all_orders && is_n_c_monotone_bruteforce(g, spec, k).holds;
    EXPECT_EQ(cyclic, all_orders) << "trial " << trial;
  }
}

TEST(Properties, BruteForceMatchesTupleOracle) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t N = static_cast<std::size_t>(testsupport::rand_int(rng, 2, 3));
    const auto pts = testsupport::random_1d_points(rng, N, static_cast<std::size_t>(testsupport::rand_int(rng, 1, 4)), 2);
    const GammaSet g(pts);
    const auto c1 = classical_cost(Classical::c1, N, 1);
    for (std::size_t n = 2; n <= 3; ++n) {
      const auto v = is_n_c_monotone_bruteforce(g, c1, n);
      EXPECT_EQ(v.holds, testsupport::oracle_n_monotone(g.points(), testsupport::oracle_c1(), n)) << trial;
      if (!v.holds) {
        EXPECT_GT(witness_gain(*v.witness, testsupport::oracle_c1()), 1e-9);
      }
    }
  }
}

TEST(Properties, FullOrderMatchesOptimalCoupling) {
  std::mt19937_64 rng(404);
  const auto c1 = classical_cost(Classical::c1, 3, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const GammaSet g(trial % 3 ? testsupport::random_1d_points(rng, 3, testsupport::rand_int(rng, 1, 5), 3)
                               : testsupport::random_comonotone_points(rng, 3, testsupport::rand_int(rng, 1, 5), 3));
    std::vector<std::vector<MarginalPoint>> columns(3);
    for (const auto& p : g.points())
      for (std::size_t i = 0; i < 3; ++i) columns[i].push_back(p[i]);
    const bool diagonal = brute_force_optimal_coupling(columns, c1).diagonal_optimal;
    EXPECT_EQ(is_n_c_monotone_bruteforce(g, c1, g.size()).holds, diagonal) << "trial " << trial;
  }
}

TEST(Properties, SeparableShiftLeavesVerdictsUnchanged) {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 30; ++trial) {
    const GammaSet g(testsupport::random_1d_points(rng, 3, testsupport::rand_int(rng, 2, 4), 2));
    const auto c1 = classical_cost(Classical::c1, 3, 1);
    const auto base = all_verdicts(g, c1, 3);
    for (int k = 0; k < 20; ++k) {
      const auto shifted = add_separable_shift(
          c1, {random_quadratic_shift(rng), random_quadratic_shift(rng), random_quadratic_shift(rng)});
      EXPECT_TRUE(all_verdicts(g, shifted, 3) == base) << "trial " << trial << " shift " << k;
    }
  }
}

TEST(Properties, TranslationLeavesVerdictsUnchanged) {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    const GammaSet g(testsupport::random_1d_points(rng, 3, testsupport::rand_int(rng, 2, 4), 2));
    const auto z = scalar_tuple({double(testsupport::rand_int(rng, -5, 5)), double(testsupport::rand_int(rng, -5, 5)),
                                 double(testsupport::rand_int(rng, -5, 5))});
    for (auto which : {Classical::c1, Classical::c3}) {
      const auto c = classical_cost(which, 3, 1);
      EXPECT_TRUE(all_verdicts(g, c, 3) == all_verdicts(translate(g, z), c, 3)) << "trial " << trial;
    }
  }
}

TEST(Properties, ClassicalCostsAgree) {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 100; ++trial) {
    const GammaSet g(testsupport::random_1d_points(rng, 3, testsupport::rand_int(rng, 2, 4), 2));
    const auto v1 = all_verdicts(g, classical_cost(Classical::c1, 3, 1), 3);
    const auto v2 = all_verdicts(g, negated(classical_cost(Classical::c2, 3, 1)), 3);
    const auto v3 = all_verdicts(g, classical_cost(Classical::c3, 3, 1), 3);
    EXPECT_TRUE(v1.brute == v2.brute && v1.brute == v3.brute) << "trial " << trial;
    EXPECT_EQ(v1.c_monotone, v2.c_monotone);
    EXPECT_EQ(v1.c_monotone, v3.c_monotone);
  }
}

TEST(Properties, WitnessesViolateUnderIndependentCost) {
  std::mt19937_64 rng(808);
  int seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const GammaSet g(testsupport::random_1d_points(rng, 3, 3, 3));
    const auto c2neg = negated(classical_cost(Classical::c2, 3, 1));
    const auto v = is_n_c_monotone_bruteforce(g, c2neg, 3);
    if (v.holds) continue;
    ++seen;
    const auto oracle = [](const std::vector<MarginalPoint>& x) { return -testsupport::oracle_c2()(x); };
    EXPECT_GT(witness_gain(*v.witness, oracle), 1e-9);
    EXPECT_GT(witness_gain(*v.witness, total_cost_fn(c2neg)), 1e-9);
  }
  EXPECT_GT(seen, 10);
}
