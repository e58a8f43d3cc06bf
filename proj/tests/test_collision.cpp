#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

#include "offpolicy/collision.hpp"

using namespace offpolicy;

namespace {

const TaskSpec kTask{};

// Finds the first transition in a long stream that matches the predicate.
template <class Pred>
StateTransition find_transition(Pred pred) {
  const auto stream = sample_state_stream(kTask, behavior_policy(kTask), target_policy(kTask), 20000, 4);
  for (const auto& t : stream) {
    if (pred(t)) return t;
  }
  ADD_FAILURE() << "no matching transition";
  return {};
}

}  // namespace

TEST(Policies, BehaviorAndTarget) {
  const Policy b = behavior_policy(kTask);
  const Policy pi = target_policy(kTask);
  for (int s = 0; s < 4; ++s) EXPECT_EQ(b.prob(s, Action::kForward), 1.0);
  for (int s = 4; s < 8; ++s) {
    EXPECT_EQ(b.prob(s, Action::kForward), 0.5);
    EXPECT_EQ(b.prob(s, Action::kTurnaway), 0.5);
  }
  for (int s = 0; s < 8; ++s) EXPECT_EQ(pi.prob(s, Action::kForward), 1.0);
}

TEST(FeatureMap, ShapeAndActiveCount) {
  const FeatureMap fm = generate_feature_map(3, 6, 3);
  ASSERT_EQ(fm.num_states(), 8);
  ASSERT_EQ(fm.dim(), 6);
  for (int s = 0; s < 8; ++s) {
    EXPECT_EQ(fm.row(s).sum(), 3.0);
    for (int j = 0; j < 6; ++j) EXPECT_TRUE(fm.row(s)(j) == 0.0 || fm.row(s)(j) == 1.0);
  }
}

TEST(FeatureMap, DeterministicPerSeed) {
  EXPECT_EQ(generate_feature_map(17, 6, 3), generate_feature_map(17, 6, 3));
  bool any_differs = false;
  for (std::uint64_t s = 0; s < 10; ++s) any_differs |= !(generate_feature_map(s, 6, 3) == generate_feature_map(s + 1, 6, 3));
  EXPECT_TRUE(any_differs);
}

TEST(FeatureMap, CannotRepresentValuesExactly) {
  const FeatureMap fm = generate_feature_map(5, 6, 3);
  Eigen::FullPivLU<Matrix> lu(fm.matrix());
  EXPECT_LE(lu.rank(), 6);
}

TEST(FeatureMap, RejectsBadShapes) {
  EXPECT_THROW(generate_feature_map(0, 6, 0), ConfigError);
  EXPECT_THROW(generate_feature_map(0, 6, 6), ConfigError);
  EXPECT_THROW(generate_feature_map(0, 0, 0), ConfigError);
}

TEST(Stream, ForcedForwardSegment) {
  const auto t = find_transition([](const StateTransition& t) { return t.state == 0; });
  EXPECT_EQ(t.action, Action::kForward);
  EXPECT_EQ(t.next_state, 1);
  EXPECT_EQ(t.reward, 0.0);
  EXPECT_EQ(t.discount_next, 0.9);
  EXPECT_EQ(t.rho, 1.0);
}

TEST(Stream, CollisionEndsEpisode) {
  const auto t = find_transition(
      [](const StateTransition& t) { return t.state == 7 && t.action == Action::kForward; });
  EXPECT_EQ(t.reward, 1.0);
  EXPECT_EQ(t.discount_next, 0.0);
  EXPECT_TRUE(t.terminal());
  EXPECT_EQ(t.rho, 2.0);
}

TEST(Stream, TurnawayHasZeroRatio) {
  const auto t = find_transition(
      [](const StateTransition& t) { return t.state == 4 && t.action == Action::kTurnaway; });
  EXPECT_EQ(t.reward, 0.0);
  EXPECT_EQ(t.discount_next, 0.0);
  EXPECT_EQ(t.rho, 0.0);
  EXPECT_EQ(t.b, 0.5);
  EXPECT_EQ(t.pi, 0.0);
}

TEST(Stream, ExactLengthAndTerminalFeatures) {
  const FeatureMap fm = generate_feature_map(1, 6, 3);
  const auto stream = sample_stream(kTask, behavior_policy(kTask), target_policy(kTask), fm, 777, 8);
  ASSERT_EQ(stream.size(), 777U);
  for (const auto& t : stream) {
    if (t.discount_next == 0.0) {
      EXPECT_TRUE(t.x_next.isZero());
    }
    EXPECT_EQ(t.rho, t.pi / t.b);
  }
}

TEST(Stream, EpisodesChainAndStartInFirstFourStates) {
  const auto stream = sample_state_stream(kTask, behavior_policy(kTask), target_policy(kTask), 5000, 2);
  EXPECT_LT(stream.front().state, 4);
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i - 1].terminal()) {
      EXPECT_LT(stream[i].state, 4);
    } else {
      EXPECT_EQ(stream[i].state, stream[i - 1].next_state);
    }
  }
}

TEST(Stream, ZeroStepsRejected) {
  EXPECT_THROW(sample_stream(kTask, behavior_policy(kTask), target_policy(kTask), generate_feature_map(0, 6, 3), 0, 0),
               ConfigError);
}

TEST(Stream, DeterministicPerSeed) {
  const auto a = sample_state_stream(kTask, behavior_policy(kTask), target_policy(kTask), 1000, 5);
  const auto b = sample_state_stream(kTask, behavior_policy(kTask), target_policy(kTask), 1000, 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].state, b[i].state);
    ASSERT_EQ(a[i].action, b[i].action);
  }
}

TEST(TrueValues, PowersOfDiscount) {
  const Vector v = true_values(kTask);
  EXPECT_DOUBLE_EQ(v(7), 1.0);
  EXPECT_NEAR(v(0), 0.4782969, 1e-12);
  EXPECT_NEAR(v(4), 0.729, 1e-12);
}

TEST(StateDistribution, AnalyticValues) {
  const auto mu = stationary_distribution_analytic(kTask, behavior_policy(kTask));
  const double expected[] = {2, 4, 6, 8, 8, 4, 2, 1};
  for (int s = 0; s < 8; ++s) EXPECT_NEAR(mu.weights(s), expected[s] / 35.0, 1e-15);
  EXPECT_NEAR(mu.weights.sum(), 1.0, 1e-15);
  Eigen::Index arg = 0;
  mu.weights.maxCoeff(&arg);
  EXPECT_TRUE(arg == 3 || arg == 4);
}

TEST(StateDistribution, SampledMatchesAnalytic) {
  const auto sampled = stationary_distribution_sampled(kTask, behavior_policy(kTask), 1'000'000, 0);
  const auto exact = stationary_distribution_analytic(kTask, behavior_policy(kTask));
  EXPECT_LE((sampled.weights - exact.weights).lpNorm<Eigen::Infinity>(), 0.005);
}

TEST(StateDistribution, SingleSampleIsOneHot) {
  const auto mu = stationary_distribution_sampled(kTask, behavior_policy(kTask), 1, 0);
  EXPECT_EQ(mu.weights.sum(), 1.0);
  EXPECT_EQ(mu.weights.maxCoeff(), 1.0);
  EXPECT_THROW(stationary_distribution_sampled(kTask, behavior_policy(kTask), 0, 0), ConfigError);
}

TEST(StateDistribution, ReproducibleCounts) {
  const auto a = stationary_distribution_sampled(kTask, behavior_policy(kTask), 10000, 6);
  const auto b = stationary_distribution_sampled(kTask, behavior_policy(kTask), 10000, 6);
  EXPECT_EQ(a.weights, b.weights);
}
