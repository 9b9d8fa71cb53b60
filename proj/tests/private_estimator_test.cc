// Copyright 2026 The Collider Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "collider/private_estimator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "absl/status/status.h"
#include "collider/batch.h"
#include "collider/distribution.h"
#include "collider/hash_channel.h"
#include "collider/random.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace collider {
namespace {

using ::testing::DoubleNear;
using ::testing::HasSubstr;

const double kLn3 = std::log(3.0);

struct MeanAndError {
  double mean;
  double std_error;
};

MeanAndError MeanWithError(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

TEST(PlanMechanismTest, UnitLogDelta) {
  auto plan = PlanMechanism(1600, 1.0, std::exp(-1.0), {kLn3, 0.04});
  ASSERT_TRUE(plan.ok());
  EXPECT_EQ(plan->groups, 160);
  EXPECT_EQ(plan->supergroups, 8);
  EXPECT_EQ(plan->groups_per_supergroup, 20);
  EXPECT_DOUBLE_EQ(plan->group_size, 10.0);
}

TEST(PlanMechanismTest, GroupsPerSupergroupIsTwentyOverEpsSquared) {
  for (double eps : {1.0, 0.5}) {
    auto plan = PlanMechanism(100000, eps, std::exp(-1.0), {1.0, 0.1});
    ASSERT_TRUE(plan.ok());
    EXPECT_EQ(plan->groups_per_supergroup,
              static_cast<int64_t>(std::round(20.0 / (eps * eps))));
  }
}

TEST(PlanMechanismTest, HalfDelta) {
  auto plan = PlanMechanism(1000000, 1.0, 0.5, {2.0, 0.01});
  ASSERT_TRUE(plan.ok());
  EXPECT_EQ(plan->groups, 111);
  EXPECT_EQ(plan->supergroups, 6);
  EXPECT_EQ(plan->groups_per_supergroup, 19);
  EXPECT_LE(plan->supergroups, plan->groups);
}

TEST(PlanMechanismTest, TooFewUsersNamesMinimum) {
  auto plan = PlanMechanism(100, 1.0, std::exp(-1.0), {1.0, 0.1});
  EXPECT_EQ(plan.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(plan.status().message(), HasSubstr("160"));
}

TEST(PlanMechanismTest, InvalidAccuracy) {
  EXPECT_FALSE(PlanMechanism(1000, 0.0, 0.1, {1.0, 0.1}).ok());
  EXPECT_FALSE(PlanMechanism(1000, 1.5, 0.1, {1.0, 0.1}).ok());
  EXPECT_FALSE(PlanMechanism(1000, 1.0, 1.0, {1.0, 0.1}).ok());
  EXPECT_FALSE(PlanMechanism(1000, 1.0, 0.1, {1.0, 2.0}).ok());
}

TEST(RecommendedUsersTest, ClosedForm) {
  const double delta = std::exp(-1.0);
  EXPECT_EQ(*RecommendedUsers(0.1, 1.0, delta, {kLn3, 0.04}), 1420800);
  EXPECT_EQ(*RecommendedUsers(1.0, 1.0, delta, {kLn3, 0.04}), 142080);
  EXPECT_EQ(*RecommendedUsers(0.1, 0.5, delta, {kLn3, 0.04}), 4 * 1420800);
}

TEST(RecommendedUsersTest, MatchesDirectEvaluation) {
  const PrivacyParams params{2.0, 0.01};
  const int64_t r = *RequiredSalts(params);
  const double direct = 1280.0 * r * std::log(2.0) / 0.1;
  EXPECT_EQ(*RecommendedUsers(0.1, 1.0, 0.5, params),
            static_cast<int64_t>(std::ceil(direct)));
}

TEST(RecommendedUsersTest, InvalidLowerBound) {
  EXPECT_FALSE(RecommendedUsers(0.0, 1.0, 0.5, {1.0, 0.1}).ok());
  EXPECT_FALSE(RecommendedUsers(1.5, 1.0, 0.5, {1.0, 0.1}).ok());
}

TEST(GroupStatisticTest, ZeroWhenSquaredSumEqualsGroupSize) {
  EXPECT_DOUBLE_EQ(GroupStatistic(2, 4.0, 111), 0.0);
  EXPECT_DOUBLE_EQ(GroupStatistic(-2, 4.0, 111), 0.0);
}

TEST(GroupStatisticTest, EmptyGroup) {
  EXPECT_DOUBLE_EQ(GroupStatistic(0, 10.0, 24), -24.0 / 10.0);
}

TEST(LowerMedianTest, OddAndEven) {
  EXPECT_DOUBLE_EQ(LowerMedian({1.0, 2.0, 100.0}), 2.0);
  EXPECT_DOUBLE_EQ(LowerMedian({100.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(LowerMedian({4.0, 1.0, 3.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(LowerMedian({7.0}), 7.0);
}

MechanismPlan SmallPlan(int64_t groups, int64_t supergroups, double m) {
  MechanismPlan plan;
  plan.groups = groups;
  plan.supergroups = supergroups;
  plan.groups_per_supergroup = (groups + supergroups - 1) / supergroups;
  plan.group_size = m;
  return plan;
}

TEST(AggregateGroupsTest, MatchesHandComputation) {
  // Ten groups in three supergroups of sizes 3, 3, 4.
  const MechanismPlan plan = SmallPlan(10, 3, 4.0);
  std::vector<GroupState> groups;
  for (int64_t j = 1; j <= 10; ++j) groups.push_back({j, 5, j % 5});
  const EstimateResult result = AggregateGroups(plan, 2, groups);
  std::vector<double> expected;
  for (auto [begin, end] : {std::pair{0, 3}, {3, 6}, {6, 10}}) {
    double sum = 0;
    for (int j = begin; j < end; ++j) {
      const double v = groups[j].report_sum;
      sum += 2.0 * (v * v - 4.0) / 16.0;
    }
    expected.push_back(sum / (end - begin));
  }
  ASSERT_EQ(result.supergroup_means.size(), 3u);
  for (int s = 0; s < 3; ++s) {
    EXPECT_THAT(result.supergroup_means[s], DoubleNear(expected[s], 1e-12));
  }
  std::sort(expected.begin(), expected.end());
  EXPECT_DOUBLE_EQ(result.c_hat, expected[1]);
  EXPECT_EQ(result.users_consumed, 50);
}

TEST(AggregateGroupsTest, NoEmptySupergroups) {
  // ceil(10 / 4) = 3 groups per supergroup would leave the last one empty
  // under fixed-size blocks.
  const MechanismPlan plan = SmallPlan(10, 4, 1.0);
  std::vector<GroupState> groups;
  for (int64_t j = 1; j <= 10; ++j) groups.push_back({j, 1, 1});
  const EstimateResult result = AggregateGroups(plan, 1, groups);
  ASSERT_EQ(result.supergroup_means.size(), 4u);
  for (double mean : result.supergroup_means) EXPECT_DOUBLE_EQ(mean, 0.0);
}

TEST(AggregateGroupsTest, MedianInvariantUnderSupergroupPermutation) {
  // Supergroups of two groups each; swap whole blocks.
  const MechanismPlan plan = SmallPlan(8, 4, 3.0);
  std::vector<GroupState> groups = {{1, 3, 1}, {2, 3, 3}, {3, 2, 0},
                                    {4, 4, 2}, {5, 5, 5}, {6, 1, -1},
                                    {7, 3, -3}, {8, 0, 0}};
  const double c_hat = AggregateGroups(plan, 5, groups).c_hat;
  std::vector<GroupState> permuted = {groups[6], groups[7], groups[2],
                                      groups[3], groups[0], groups[1],
                                      groups[4], groups[5]};
  EXPECT_DOUBLE_EQ(AggregateGroups(plan, 5, permuted).c_hat, c_hat);
}

TEST(SimulateGroupTest, ReportSumBoundedByUsers) {
  auto d = DiscreteDistribution::Uniform(10);
  auto channel = HashChannel::Create({kLn3, 0.04}, KeyFromSeed(1));
  ASSERT_TRUE(d.ok() && channel.ok());
  const MechanismPlan plan = SmallPlan(100, 5, 20.0);
  for (int64_t j = 1; j <= 100; ++j) {
    const GroupState state = SimulateGroup(plan, *channel, *d, j, 99);
    EXPECT_EQ(state.group_id, j);
    EXPECT_LE(std::abs(state.report_sum), state.users);
    EXPECT_EQ(std::abs(state.report_sum) % 2, state.users % 2);
  }
}

TEST(SimulateGroupTest, IndependentOfEvaluationOrder) {
  auto d = DiscreteDistribution::PowerLaw(50);
  auto channel = HashChannel::Create({1.0, 0.1}, KeyFromSeed(2));
  ASSERT_TRUE(d.ok() && channel.ok());
  const MechanismPlan plan = SmallPlan(20, 4, 30.0);
  std::vector<GroupState> forward;
  for (int64_t j = 1; j <= 20; ++j) {
    forward.push_back(SimulateGroup(plan, *channel, *d, j, 7));
  }
  for (int64_t j = 20; j >= 1; --j) {
    const GroupState again = SimulateGroup(plan, *channel, *d, j, 7);
    EXPECT_EQ(again.users, forward[j - 1].users);
    EXPECT_EQ(again.report_sum, forward[j - 1].report_sum);
  }
}

TEST(SimulateGroupTest, GroupStatisticIsUnbiased) {
  auto d = DiscreteDistribution::Uniform(10);
  auto channel = HashChannel::Create({kLn3, 0.04}, KeyFromSeed(3));
  ASSERT_TRUE(d.ok() && channel.ok());
  const MechanismPlan plan = SmallPlan(20000, 1, 20.0);
  std::vector<double> stats;
  for (int64_t j = 1; j <= plan.groups; ++j) {
    const GroupState state = SimulateGroup(plan, *channel, *d, j, 11);
    stats.push_back(
        GroupStatistic(state.report_sum, plan.group_size, channel->salts()));
  }
  const MeanAndError m = MeanWithError(stats);
  EXPECT_THAT(m.mean, DoubleNear(0.1, 4.0 * m.std_error));
}

TEST(RunMechanismTest, ParamsMismatchIsRejected) {
  auto d = DiscreteDistribution::Uniform(10);
  auto plan = PlanMechanism(1000, 1.0, 0.5, {1.0, 0.1});
  auto channel = HashChannel::Create({2.0, 0.1}, KeyFromSeed(1));
  ASSERT_TRUE(d.ok() && plan.ok() && channel.ok());
  Rng rng(1);
  EXPECT_EQ(RunMechanism(*plan, *channel, *d, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(RunMechanismTest, DeterministicForSeed) {
  auto d = DiscreteDistribution::PowerLaw(100);
  const PrivacyParams params{1.0, 0.1};
  auto plan = PlanMechanism(5000, 1.0, 0.5, params);
  auto channel = HashChannel::Create(params, KeyFromSeed(4));
  ASSERT_TRUE(d.ok() && plan.ok() && channel.ok());
  Rng a(123);
  Rng b(123);
  auto x = RunMechanism(*plan, *channel, *d, a);
  auto y = RunMechanism(*plan, *channel, *d, b);
  ASSERT_TRUE(x.ok() && y.ok());
  EXPECT_EQ(x->c_hat, y->c_hat);
  EXPECT_EQ(x->users_consumed, y->users_consumed);
  EXPECT_EQ(x->supergroup_means.size(), 6u);
  EXPECT_DOUBLE_EQ(x->c_hat, LowerMedian(x->supergroup_means));
}

TEST(RunMechanismTest, UsersConsumedAveragesToN) {
  auto d = DiscreteDistribution::Uniform(10);
  const PrivacyParams params{1.0, 0.1};
  const int64_t n = 2000;
  auto plan = PlanMechanism(n, 1.0, 0.5, params);
  auto channel = HashChannel::Create(params, KeyFromSeed(5));
  ASSERT_TRUE(d.ok() && plan.ok() && channel.ok());
  Rng rng(8);
  std::vector<double> users;
  for (int run = 0; run < 300; ++run) {
    auto result = RunMechanism(*plan, *channel, *d, rng);
    ASSERT_TRUE(result.ok());
    users.push_back(static_cast<double>(result->users_consumed));
  }
  const MeanAndError m = MeanWithError(users);
  EXPECT_THAT(m.mean, DoubleNear(static_cast<double>(n), 4.0 * m.std_error));
}

TEST(KRapporTest, ConstantsAtTwoLnThree) {
  auto c = KRapporConstantsFor(2.0 * kLn3);
  ASSERT_TRUE(c.ok());
  EXPECT_THAT(c->flip, DoubleNear(0.25, 1e-15));
  EXPECT_THAT(c->scale, DoubleNear(2.0, 1e-14));
  EXPECT_THAT(c->offset, DoubleNear(0.5, 1e-15));
}

TEST(KRapporTest, ConstantsLimit) {
  auto c = KRapporConstantsFor(2000.0);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->flip, 0.0);
  EXPECT_EQ(c->scale, 1.0);
  EXPECT_EQ(c->offset, 0.0);
  EXPECT_FALSE(KRapporConstantsFor(0.0).ok());
}

TEST(KRapporTest, NoNoiseReducesToPlugIn) {
  auto d = DiscreteDistribution::PowerLaw(20);
  ASSERT_TRUE(d.ok());
  const int64_t n = 5000;
  Rng rng(31);
  Rng shadow(31);
  std::vector<int64_t> samples;
  for (int64_t i = 0; i < n; ++i) samples.push_back(d->Sample(shadow));
  auto estimate = KRapporIndirectEstimate(*d, n, 2000.0, rng);
  ASSERT_TRUE(estimate.ok());
  EXPECT_THAT(*estimate, DoubleNear(*PlugIn(samples), 1e-12));
}

TEST(KRapporTest, MeanMatchesVarianceInflatedCollision) {
  // Each coordinate's count of ones is Binomial(n, q_x) with
  // q_x = p_x (1 - f) + (1 - p_x) f, so
  // E[estimate] = C(p) + scale^2 / n * sum_x q_x (1 - q_x).
  auto d = DiscreteDistribution::PowerLaw(30);
  ASSERT_TRUE(d.ok());
  const double alpha = 2.0;
  const int64_t n = 2000;
  const KRapporConstants c = *KRapporConstantsFor(alpha);
  double expected = CollisionProbability(*d);
  for (double p : d->probs()) {
    const double q = p * (1 - c.flip) + (1 - p) * c.flip;
    expected += c.scale * c.scale * q * (1 - q) / static_cast<double>(n);
  }
  Rng rng(41);
  std::vector<double> estimates;
  for (int trial = 0; trial < 2000; ++trial) {
    estimates.push_back(*KRapporIndirectEstimate(*d, n, alpha, rng));
  }
  const MeanAndError m = MeanWithError(estimates);
  EXPECT_THAT(m.mean, DoubleNear(expected, 4.0 * m.std_error));
}

TEST(KRapporTest, Errors) {
  auto d = DiscreteDistribution::Uniform(5);
  ASSERT_TRUE(d.ok());
  Rng rng(1);
  EXPECT_FALSE(KRapporIndirectEstimate(*d, 0, 1.0, rng).ok());
  EXPECT_FALSE(KRapporIndirectEstimate(*d, 10, 0.0, rng).ok());
}

TEST(CeilFormulaTest, AbsorbsRoundingNoise) {
  EXPECT_EQ(CeilFormula(160.00000000000003), 160);
  EXPECT_EQ(CeilFormula(160.0), 160);
  EXPECT_EQ(CeilFormula(160.001), 161);
  EXPECT_EQ(CeilFormula(0.5), 1);
}

}  // namespace
}  // namespace collider
