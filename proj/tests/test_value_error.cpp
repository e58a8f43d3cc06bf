#include <gtest/gtest.h>

#include "offpolicy/random.hpp"
#include "offpolicy/value_error.hpp"

using namespace offpolicy;

namespace {

const TaskSpec kTask{};

StateDistribution analytic_mu() { return stationary_distribution_analytic(kTask, behavior_policy(kTask)); }

}  // namespace

TEST(ValueError, InitialErrorOracle) {
  const FeatureMap fm = generate_feature_map(0, 6, 3);
  const Vector zero = Vector::Zero(6);
  EXPECT_NEAR(ve(zero, fm, analytic_mu(), true_values(kTask)), 0.474828, 1e-6);
  EXPECT_NEAR(rve(zero, fm, analytic_mu(), true_values(kTask)), 0.689, 0.001);
}

TEST(ValueError, TabularSolutionIsExact) {
  const FeatureMap fm = one_hot_feature_map();
  const Vector w = solve_wstar(fm, analytic_mu(), true_values(kTask));
  EXPECT_NEAR(ve(w, fm, analytic_mu(), true_values(kTask)), 0.0, 1e-24);
}

TEST(ValueError, WstarIsMinimal) {
  Rng rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FeatureMap fm = generate_feature_map(seed, 6, 3);
    const Vector v = true_values(kTask);
    const Vector w = solve_wstar(fm, analytic_mu(), v);
    const double best = ve(w, fm, analytic_mu(), v);
    for (int k = 0; k < 20; ++k) {
      Vector u(6);
      for (int j = 0; j < 6; ++j) u(j) = rng.uniform() - 0.5;
      EXPECT_LE(best, ve(w + 1e-3 * u, fm, analytic_mu(), v) + 1e-15);
    }
  }
}

TEST(ValueError, RankDeficientMapGetsMinimumNorm) {
  Matrix x = Matrix::Zero(8, 3);
  x.col(0).setOnes();
  x.col(1).setOnes();  // duplicate column
  x(7, 2) = 1.0;
  const FeatureMap fm(x, 2);
  const Vector w = solve_wstar(fm, analytic_mu(), true_values(kTask));
  EXPECT_NEAR(w(0), w(1), 1e-12);
  EXPECT_TRUE(w.allFinite());
}

TEST(ValueError, ConvexAlongChords) {
  const FeatureMap fm = generate_feature_map(9, 6, 3);
  const Vector v = true_values(kTask);
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    Vector a(6), b(6);
    for (int j = 0; j < 6; ++j) {
      a(j) = 2 * rng.uniform() - 1;
      b(j) = 2 * rng.uniform() - 1;
    }
    const double t = rng.uniform();
    EXPECT_LE(ve(t * a + (1 - t) * b, fm, analytic_mu(), v),
              t * ve(a, fm, analytic_mu(), v) + (1 - t) * ve(b, fm, analytic_mu(), v) + 1e-12);
  }
}
