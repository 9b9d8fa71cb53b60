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

#ifndef COLLIDER_PRIVATE_SEQUENTIAL_H_
#define COLLIDER_PRIVATE_SEQUENTIAL_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "collider/distribution.h"
#include "collider/hash_channel.h"
#include "collider/random.h"
#include "collider/sequential_tester.h"

namespace collider {

// Null value in hashed-report space: c0 / (2r) + 1/2.
double BiasedNull(double c0, int64_t salts);

// sqrt(2r) * Threshold(i, delta).
absl::StatusOr<double> PsqThreshold(int64_t i, double delta, int64_t salts);

// Private sequential tester. Every user hashes <0, salt, x> through a channel
// with a fresh key drawn from `rng`; the reports feed a SequentialTester over
// {-1, +1} with null BiasedNull(c0, r) and threshold PsqThreshold.
absl::StatusOr<Verdict> RunPsq(const DiscreteDistribution& d, double c0,
                               double delta, const PrivacyParams& params,
                               int64_t budget, Rng& rng,
                               NullCentering centering = NullCentering::kProof);

// Per-round failure budget 6 delta / (pi^2 t^2), t >= 1; sums to delta.
double RoundDelta(double delta, int round);

struct DoublingOptions {
  int64_t n0 = int64_t{1} << 13;
  int max_rounds = 10;
  // Lower bound on C(p) used to turn the round size into an error bound.
  // Passing c0 makes the half-width the estimator's guarantee at the null.
  double c_lower = 0.0;
};

struct DoublingRound {
  int round = 0;
  int64_t n = 0;            // n0 * 2^(round-1)
  double delta = 0.0;       // RoundDelta(delta, round)
  double eps_rel = 0.0;     // relative error n buys at c_lower (may exceed 1)
  double half_width = 0.0;  // eps_rel * c_lower
  double c_hat = 0.0;
  int64_t users = 0;        // Poisson users actually consumed
};

struct DoublingResult {
  Verdict verdict;
  std::vector<DoublingRound> history;
};

// Runs the private estimator with n_t = n0 2^(t-1) users at round t and
// rejects once |C_hat_t - c0| > 2 w_t. There is no accept rule; the run ends
// after max_rounds without rejection. verdict.samples counts all users.
absl::StatusOr<DoublingResult> RunDoubling(const DiscreteDistribution& d,
                                           double c0, double delta,
                                           const PrivacyParams& params,
                                           const DoublingOptions& options,
                                           Rng& rng);

}  // namespace collider

#endif  // COLLIDER_PRIVATE_SEQUENTIAL_H_
