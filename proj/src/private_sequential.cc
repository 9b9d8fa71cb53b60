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

#include "collider/private_sequential.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "collider/private_estimator.h"
#include "collider/status_macros.h"

namespace collider {

double BiasedNull(double c0, int64_t salts) {
  return c0 / (2.0 * static_cast<double>(salts)) + 0.5;
}

absl::StatusOr<double> PsqThreshold(int64_t i, double delta, int64_t salts) {
  if (salts < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("salt count must be >= 1, got ", salts));
  }
  ASSIGN_OR_RETURN(double base, Threshold(i, delta));
  return std::sqrt(2.0 * static_cast<double>(salts)) * base;
}

absl::StatusOr<Verdict> RunPsq(const DiscreteDistribution& d, double c0,
                               double delta, const PrivacyParams& params,
                               int64_t budget, Rng& rng,
                               NullCentering centering) {
  if (budget < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget must be >= 2, got ", budget));
  }
  if (!(c0 >= 0.0 && c0 <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("c0 must lie in [0, 1], got ", c0));
  }
  ASSIGN_OR_RETURN(HashChannel channel,
                   HashChannel::Create(params, RandomKey(rng)));
  const int64_t r = channel.salts();
  ASSIGN_OR_RETURN(
      SequentialTester tester,
      SequentialTester::Create(
          BiasedNull(c0, r), delta,
          {.centering = centering,
           .threshold_scale = std::sqrt(2.0 * static_cast<double>(r))}));
  Verdict verdict;
  while (tester.samples() < budget) {
    const int64_t x = d.Sample(rng);
    const Report v = channel.Privatize(0, static_cast<uint64_t>(x), rng);
    ASSIGN_OR_RETURN(bool rejected, tester.Update(Sign(v)));
    if (rejected) {
      verdict.rejected = true;
      verdict.n_at_decision = tester.samples();
      break;
    }
  }
  verdict.samples = tester.samples();
  verdict.budget_exhausted = !verdict.rejected;
  verdict.statistic = tester.statistic();
  return verdict;
}

double RoundDelta(double delta, int round) {
  const double t = static_cast<double>(round);
  return 6.0 * delta / (std::numbers::pi * std::numbers::pi * t * t);
}

absl::StatusOr<DoublingResult> RunDoubling(const DiscreteDistribution& d,
                                           double c0, double delta,
                                           const PrivacyParams& params,
                                           const DoublingOptions& options,
                                           Rng& rng) {
  if (!(c0 >= 0.0 && c0 <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("c0 must lie in [0, 1], got ", c0));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (!(options.c_lower > 0.0 && options.c_lower <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "doubling needs c_lower in (0, 1], got ", options.c_lower));
  }
  if (options.n0 < 1 || options.max_rounds < 1) {
    return absl::InvalidArgumentError("doubling needs n0 >= 1 and max_rounds >= 1");
  }
  ASSIGN_OR_RETURN(int64_t salts, RequiredSalts(params));

  DoublingResult result;
  for (int t = 1; t <= options.max_rounds; ++t) {
    DoublingRound round;
    round.round = t;
    round.n = options.n0 << (t - 1);
    round.delta = RoundDelta(delta, t);
    // Inverts n = 1280 r ln(1/delta_t) / (eps_rel^2 c_lower).
    round.eps_rel = std::sqrt(1280.0 * static_cast<double>(salts) *
                              std::log(1.0 / round.delta) /
                              (static_cast<double>(round.n) * options.c_lower));
    round.half_width = round.eps_rel * options.c_lower;

    ASSIGN_OR_RETURN(MechanismPlan plan,
                     PlanMechanism(round.n, std::min(1.0, round.eps_rel),
                                   round.delta, params));
    ASSIGN_OR_RETURN(HashChannel channel,
                     HashChannel::Create(params, RandomKey(rng)));
    ASSIGN_OR_RETURN(EstimateResult estimate,
                     RunMechanism(plan, channel, d, rng));
    round.c_hat = estimate.c_hat;
    round.users = estimate.users_consumed;
    result.history.push_back(round);
    result.verdict.samples += round.users;

    if (std::abs(round.c_hat - c0) > 2.0 * round.half_width) {
      result.verdict.rejected = true;
      result.verdict.n_at_decision = result.verdict.samples;
      break;
    }
  }
  result.verdict.budget_exhausted = !result.verdict.rejected;
  result.verdict.statistic = result.history.back().c_hat - c0;
  return result;
}

}  // namespace collider
