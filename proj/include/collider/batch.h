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

#ifndef COLLIDER_BATCH_H_
#define COLLIDER_BATCH_H_

#include <cstdint>
#include <optional>
#include <span>

#include "absl/status/statusor.h"
#include "collider/distribution.h"
#include "collider/random.h"

namespace collider {

// All-pairs collision frequency 2/(n(n-1)) sum_{i<j} 1{x_i = x_j}, computed
// from value counts. Requires n >= 2.
absl::StatusOr<double> UStatistic(std::span<const int64_t> samples);

// Collision probability of the empirical distribution. Requires n >= 1.
absl::StatusOr<double> PlugIn(std::span<const int64_t> samples);

enum class BatchEstimator { kPlugIn, kUStatistic };

// ceil((8 / eps^2) max(200 f32_bound^2, ln(2 / delta))), f32_bound an upper
// bound on F_{3/2}(p).
absl::StatusOr<int64_t> PlugInSampleSize(double epsilon, double delta,
                                         double f32_bound = 1.0);

// ceil(max(32 v ln(4/delta) / eps^2, (128 + 1/6) ln(4/delta) / eps)), v an
// upper bound on F_3(p) - F_2(p)^2.
absl::StatusOr<int64_t> UStatisticSampleSize(double epsilon, double delta,
                                             double variance_bound = 1.0);

// Sample-size request. Unset moment bounds fall back to 1, which holds for
// every distribution.
struct BatchSampleSizeSpec {
  BatchEstimator estimator = BatchEstimator::kUStatistic;
  double epsilon = 0.1;
  double delta = 0.1;
  std::optional<double> f32_bound;       // F_{3/2}
  std::optional<double> variance_bound;  // F_3 - F_2^2
};

absl::StatusOr<int64_t> BatchSampleSize(const BatchSampleSizeSpec& spec);

struct BatchOutcome {
  bool rejected = false;
  double estimate = 0.0;
  int64_t samples = 0;
};

// Testing by learning: draws BatchSampleSize(spec) samples, estimates C(p)
// and rejects iff |estimate - c0| > epsilon / 2.
absl::StatusOr<BatchOutcome> BatchTest(const DiscreteDistribution& d,
                                       double c0,
                                       const BatchSampleSizeSpec& spec,
                                       Rng& rng);

}  // namespace collider

#endif  // COLLIDER_BATCH_H_
