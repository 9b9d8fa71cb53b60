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
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "collider/status_macros.h"

namespace collider {
namespace {

absl::Status ValidateAccuracy(double eps_rel, double delta) {
  if (!(eps_rel > 0.0 && eps_rel <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps_rel must lie in (0, 1], got ", eps_rel));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return absl::OkStatus();
}

}  // namespace

int64_t CeilFormula(double x) {
  return static_cast<int64_t>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

absl::StatusOr<MechanismPlan> PlanMechanism(int64_t n, double eps_rel,
                                            double delta,
                                            const PrivacyParams& params) {
  RETURN_IF_ERROR(ValidateAccuracy(eps_rel, delta));
  RETURN_IF_ERROR(params.Validate());
  const double log_inv_delta = std::log(1.0 / delta);
  MechanismPlan plan;
  plan.n = n;
  plan.eps_rel = eps_rel;
  plan.delta = delta;
  plan.params = params;
  plan.groups = std::max<int64_t>(
      1, CeilFormula(160.0 * log_inv_delta / (eps_rel * eps_rel)));
  plan.supergroups = std::max<int64_t>(1, CeilFormula(8.0 * log_inv_delta));
  plan.groups_per_supergroup =
      (plan.groups + plan.supergroups - 1) / plan.supergroups;
  if (n < plan.groups) {
    return absl::FailedPreconditionError(absl::StrCat(
        "n = ", n, " is too small: the plan has ", plan.groups,
        " groups, so the minimum viable n is ", plan.groups));
  }
  plan.group_size = static_cast<double>(n) / static_cast<double>(plan.groups);
  return plan;
}

absl::StatusOr<int64_t> RecommendedUsers(double c_lower, double eps_rel,
                                         double delta,
                                         const PrivacyParams& params) {
  RETURN_IF_ERROR(ValidateAccuracy(eps_rel, delta));
  if (!(c_lower > 0.0 && c_lower <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("c_lower must lie in (0, 1], got ", c_lower));
  }
  RETURN_IF_ERROR(params.Validate());
  ASSIGN_OR_RETURN(int64_t salts, RequiredSalts(params));
  return CeilFormula(1280.0 * static_cast<double>(salts) *
                     std::log(1.0 / delta) / (eps_rel * eps_rel * c_lower));
}

double GroupStatistic(int64_t report_sum, double group_size, int64_t salts) {
  const double v = static_cast<double>(report_sum);
  return static_cast<double>(salts) * (v * v - group_size) /
         (group_size * group_size);
}

double LowerMedian(std::vector<double> values) {
  const auto mid = values.begin() + (values.size() - 1) / 2;
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

EstimateResult AggregateGroups(const MechanismPlan& plan, int64_t salts,
                               std::span<const GroupState> groups) {
  EstimateResult result;
  const int64_t g = static_cast<int64_t>(groups.size());
  const int64_t a = std::min(plan.supergroups, g);
  result.supergroup_means.reserve(a);
  for (const GroupState& group : groups) result.users_consumed += group.users;
  for (int64_t s = 0; s < a; ++s) {
    const int64_t begin = s * g / a;
    const int64_t end = (s + 1) * g / a;
    double sum = 0.0;
    for (int64_t j = begin; j < end; ++j) {
      sum += GroupStatistic(groups[j].report_sum, plan.group_size, salts);
    }
    result.supergroup_means.push_back(sum / static_cast<double>(end - begin));
  }
  result.c_hat = LowerMedian(result.supergroup_means);
  return result;
}

GroupState SimulateGroup(const MechanismPlan& plan, const HashChannel& channel,
                         const DiscreteDistribution& d, int64_t group_id,
                         uint64_t stream_seed) {
  const uint64_t group_seed =
      DeriveSeed(stream_seed, static_cast<uint64_t>(group_id));
  Rng size_rng(DeriveSeed(group_seed, 0));
  std::poisson_distribution<int64_t> poisson(plan.group_size);
  GroupState state;
  state.group_id = group_id;
  state.users = poisson(size_rng);
  for (int64_t u = 0; u < state.users; ++u) {
    Rng user_rng(DeriveSeed(group_seed, static_cast<uint64_t>(u) + 1));
    const int64_t x = d.Sample(user_rng);
    state.report_sum += Sign(channel.Privatize(
        static_cast<uint64_t>(group_id), static_cast<uint64_t>(x), user_rng));
  }
  return state;
}

absl::StatusOr<EstimateResult> RunMechanism(const MechanismPlan& plan,
                                            const HashChannel& channel,
                                            const DiscreteDistribution& d,
                                            Rng& rng) {
  if (!(plan.params == channel.params())) {
    return absl::InvalidArgumentError(
        "plan and channel were built for different privacy parameters");
  }
  if (!(plan.group_size > 0.0) || plan.groups < 1) {
    return absl::InvalidArgumentError("plan has no users per group");
  }
  const uint64_t stream_seed = rng();
  std::vector<GroupState> groups;
  groups.reserve(plan.groups);
  for (int64_t j = 1; j <= plan.groups; ++j) {
    groups.push_back(SimulateGroup(plan, channel, d, j, stream_seed));
  }
  return AggregateGroups(plan, channel.salts(), groups);
}

absl::StatusOr<KRapporConstants> KRapporConstantsFor(double alpha) {
  if (!(alpha > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("k-RAPPOR needs alpha > 0, got ", alpha));
  }
  const double half = alpha / 2.0;
  KRapporConstants c;
  if (half > 700.0) return c;  // flip -> 0, scale -> 1, offset -> 0
  const double em1 = std::expm1(half);
  c.flip = 1.0 / (em1 + 2.0);
  c.scale = (em1 + 2.0) / em1;
  c.offset = 1.0 / em1;
  return c;
}

absl::StatusOr<double> KRapporIndirectEstimate(const DiscreteDistribution& d,
                                               int64_t n, double alpha,
                                               Rng& rng) {
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("k-RAPPOR needs n >= 1, got ", n));
  }
  ASSIGN_OR_RETURN(KRapporConstants c, KRapporConstantsFor(alpha));
  const int64_t k = d.support_size();
  std::vector<int64_t> counts(k, 0);
  for (int64_t u = 0; u < n; ++u) ++counts[d.Sample(rng) - 1];

  std::vector<double> squares(k);
  for (int64_t x = 0; x < k; ++x) {
    std::binomial_distribution<int64_t> kept(counts[x], 1.0 - c.flip);
    std::binomial_distribution<int64_t> flipped_on(n - counts[x], c.flip);
    const int64_t ones = kept(rng) + flipped_on(rng);
    const double debiased =
        c.scale * static_cast<double>(ones) / static_cast<double>(n) - c.offset;
    squares[x] = debiased * debiased;
  }
  return StableSum(squares);
}

}  // namespace collider
