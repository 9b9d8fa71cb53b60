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

#ifndef COLLIDER_PRIVATE_ESTIMATOR_H_
#define COLLIDER_PRIVATE_ESTIMATOR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "collider/distribution.h"
#include "collider/hash_channel.h"
#include "collider/random.h"

namespace collider {

// Group layout for the salted-hash collision estimator.
//   groups                = ceil(160 ln(1/delta) / eps_rel^2)
//   supergroups           = ceil(8 ln(1/delta))
//   groups_per_supergroup = ceil(groups / supergroups)
//   group_size            = n / groups   (expected; actual sizes are Poisson)
struct MechanismPlan {
  int64_t n = 0;
  double eps_rel = 1.0;
  double delta = 0.5;
  PrivacyParams params;
  int64_t groups = 0;
  int64_t supergroups = 0;
  int64_t groups_per_supergroup = 0;
  double group_size = 0.0;
};

// Fails with FailedPrecondition when n < groups; the message carries the
// minimum viable n.
absl::StatusOr<MechanismPlan> PlanMechanism(int64_t n, double eps_rel,
                                            double delta,
                                            const PrivacyParams& params);

// ceil(1280 r ln(1/delta) / (eps_rel^2 c_lower)) with r = RequiredSalts(params).
absl::StatusOr<int64_t> RecommendedUsers(double c_lower, double eps_rel,
                                         double delta,
                                         const PrivacyParams& params);

// Server-side accumulator for one group.
struct GroupState {
  int64_t group_id = 0;    // 1-based
  int64_t users = 0;       // realized Poisson size N_j
  int64_t report_sum = 0;  // V_j, |V_j| <= users
};

// C_j = r (V_j^2 - m) / m^2 with the expected group size m.
double GroupStatistic(int64_t report_sum, double group_size, int64_t salts);

struct EstimateResult {
  double c_hat = 0.0;  // raw, not clamped to [0, 1]
  std::vector<double> supergroup_means;
  int64_t users_consumed = 0;
};

// Lower median (element (n-1)/2 of the sorted values). `values` non-empty.
double LowerMedian(std::vector<double> values);

// Splits groups 1..g into `supergroups` contiguous blocks whose sizes differ
// by at most one (so none exceeds groups_per_supergroup and none is empty),
// averages C_j inside each block and returns the lower median of the block
// means. `groups` must be ordered by group id and match the plan.
EstimateResult AggregateGroups(const MechanismPlan& plan, int64_t salts,
                               std::span<const GroupState> groups);

// Simulates group `group_id`: draws N_j ~ Poisson(m), then for each user a
// sample from `d`, a salt, and the channel report. All randomness comes from
// streams derived from (`stream_seed`, group_id, user index), so groups can
// be simulated in any order.
GroupState SimulateGroup(const MechanismPlan& plan, const HashChannel& channel,
                         const DiscreteDistribution& d, int64_t group_id,
                         uint64_t stream_seed);

// End-to-end run with simulated users. Draws one word from `rng` as the
// stream seed. Plan and channel must carry the same privacy parameters.
absl::StatusOr<EstimateResult> RunMechanism(const MechanismPlan& plan,
                                            const HashChannel& channel,
                                            const DiscreteDistribution& d,
                                            Rng& rng);

// Bit-flip probability and debiasing constants of k-RAPPOR at budget alpha:
// flip = 1/(e^{alpha/2} + 1), scale = (e^{alpha/2} + 1)/(e^{alpha/2} - 1),
// offset = 1/(e^{alpha/2} - 1).
struct KRapporConstants {
  double flip = 0.0;
  double scale = 1.0;
  double offset = 0.0;
};

absl::StatusOr<KRapporConstants> KRapporConstantsFor(double alpha);

// Indirect baseline: privately estimates the distribution with k-RAPPOR and
// returns the collision probability of the debiased (unclipped) estimate.
// Per-coordinate sums are drawn as Binomial(c_x, 1 - flip) +
// Binomial(n - c_x, flip), which has the same law as flipping each user's
// one-hot vector.
absl::StatusOr<double> KRapporIndirectEstimate(const DiscreteDistribution& d,
                                               int64_t n, double alpha,
                                               Rng& rng);

// ceil(x) that ignores floating-point overshoot below one part in 1e9, so
// formula values that are mathematically integral do not round up.
int64_t CeilFormula(double x);

}  // namespace collider

#endif  // COLLIDER_PRIVATE_ESTIMATOR_H_
