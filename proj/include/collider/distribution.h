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

#ifndef COLLIDER_DISTRIBUTION_H_
#define COLLIDER_DISTRIBUTION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "collider/random.h"

namespace collider {

// A probability vector over the support {1, ..., k}. Immutable once built and
// safe to share between threads; sampling state lives in the caller's Rng.
class DiscreteDistribution {
 public:
  // Normalizes non-negative `weights` (compensated summation) so the entries
  // sum to one within 1e-12. Fails on an empty vector, a negative or
  // non-finite weight, or an all-zero vector.
  static absl::StatusOr<DiscreteDistribution> FromWeights(
      std::vector<double> weights);

  // p_i = 1/k.
  static absl::StatusOr<DiscreteDistribution> Uniform(int64_t k);
  // p_i proportional to 1/i.
  static absl::StatusOr<DiscreteDistribution> PowerLaw(int64_t k);
  // p_i proportional to exp(-i).
  static absl::StatusOr<DiscreteDistribution> Exponential(int64_t k);

  int64_t support_size() const { return static_cast<int64_t>(probs_.size()); }
  std::span<const double> probs() const { return probs_; }
  // Probability of support element `id` in 1..k.
  double prob(int64_t id) const { return probs_[id - 1]; }

  // Draws an element id in 1..k by inverse CDF (binary search over the
  // cumulative array). Consumes exactly one 64-bit word from `rng`.
  int64_t Sample(Rng& rng) const;

 private:
  DiscreteDistribution(std::vector<double> probs, std::vector<double> cdf)
      : probs_(std::move(probs)), cdf_(std::move(cdf)) {}

  std::vector<double> probs_;
  std::vector<double> cdf_;
};

// Le Cam witness pair on K elements:
//   p0 = (1/(2(K-1)), ..., 1/(2(K-1)), 1/2)
//   p1 = ((1-tau)/(2(K-1)), ..., (1-tau)/(2(K-1)), (1+tau)/2)
struct TwoPointPair {
  DiscreteDistribution p0;
  DiscreteDistribution p1;
  double tau;
  int64_t support_size;
};

absl::StatusOr<TwoPointPair> MakeTwoPointPair(int64_t support_size,
                                              double tau);

// Sum of squared probabilities.
double CollisionProbability(const DiscreteDistribution& d);

// F_order(p) = sum_i p_i^order. Requires order > 0.
absl::StatusOr<double> FrequencyMoment(const DiscreteDistribution& d,
                                       double order);

absl::StatusOr<double> TvDistance(const DiscreteDistribution& a,
                                  const DiscreteDistribution& b);

// KL(a || b) in nats with 0 log 0 = 0. Returns OutOfRange when some b_i = 0
// while a_i > 0 (the divergence is undefined/infinite).
absl::StatusOr<double> KlDivergence(const DiscreteDistribution& a,
                                    const DiscreteDistribution& b);

// Compensated (Neumaier) sum.
double StableSum(std::span<const double> values);

}  // namespace collider

#endif  // COLLIDER_DISTRIBUTION_H_
