#include <gtest/gtest.h>

#include <set>

#include "offpolicy/grid.hpp"

using namespace offpolicy;

TEST(Grid, Cardinalities) {
  EXPECT_EQ(standard_alphas().size(), 19U);
  EXPECT_EQ(standard_lambdas().size(), 12U);
  EXPECT_EQ(standard_etas().size(), 15U);
  EXPECT_EQ(standard_betas().size(), 6U);
  EXPECT_EQ(zeta_values_extended().size(), 19U);
  EXPECT_EQ(standard_alphas().front(), std::ldexp(1.0, -18));
  EXPECT_EQ(standard_alphas().back(), 1.0);
  EXPECT_EQ(standard_etas().front(), 1.0 / 64);
  EXPECT_EQ(standard_etas().back(), 256.0);
}

TEST(Grid, LambdaSet) {
  const std::vector<double> expected = {0.0, 0.1, 0.2, 0.3, 0.5, 0.75, 0.875, 0.9, 0.9375, 0.96875, 0.984375, 1.0};
  EXPECT_EQ(standard_lambdas(), expected);
}

TEST(Grid, PerAlgorithmCounts) {
  EXPECT_EQ(expand_grid(Algorithm::kGtd).size(), 3420U);
  EXPECT_EQ(expand_grid(Algorithm::kOffPolicyTd).size(), 228U);
  EXPECT_EQ(expand_grid(Algorithm::kEtdBeta).size(), 12U * 19 * 6);
  EXPECT_EQ(expand_grid(Algorithm::kTdrc).size(), 228U);
  EXPECT_EQ(expand_grid(Algorithm::kAbtd).size(), 228U);
  std::size_t total = 0;
  for (Algorithm a : kAllAlgorithms) total += expand_grid(a).size();
  EXPECT_EQ(total, 16416U);
}

TEST(Grid, InstancesValidateAndKeysAreUnique) {
  std::set<std::string> keys;
  for (Algorithm a : kAllAlgorithms) {
    for (const auto& spec : expand_grid(a)) {
      EXPECT_NO_THROW(validate(spec));
      keys.insert(instance_key(spec));
    }
  }
  EXPECT_EQ(keys.size(), 16416U);
}

TEST(Grid, TdrcDefaults) {
  for (const auto& spec : expand_grid(Algorithm::kTdrc)) {
    EXPECT_EQ(spec.eta, 1.0);
    EXPECT_EQ(spec.tdrc_reg, 1.0);
  }
}

TEST(Grid, ExtendedZeta) {
  ParameterGrid g;
  g.zetas = zeta_values_extended();
  EXPECT_EQ(expand_grid(Algorithm::kAbtd, g).size(), 19U * 19);
}

TEST(Grid, TieBreakOrdering) {
  InstanceSpec a;
  a.alpha = 0.5;
  a.lambda = 0.9;
  InstanceSpec b = a;
  b.alpha = 0.25;
  EXPECT_TRUE(parameter_less(b, a));
  b.alpha = 0.5;
  b.lambda = 0.5;
  EXPECT_TRUE(parameter_less(b, a));
  EXPECT_FALSE(parameter_less(a, a));
}

TEST(Grid, FormatRealRoundTrips) {
  for (double x : {0.1, 1.0 / 3, std::ldexp(1.0, -18), 0.984375, 123456.789}) {
    EXPECT_EQ(std::stod(format_real(x)), x);
  }
  EXPECT_EQ(format_real(0.5), "0.5");
}
