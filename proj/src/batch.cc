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

#include "collider/batch.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "collider/private_estimator.h"
#include "collider/status_macros.h"

namespace collider {
namespace {

// Sum over distinct values of count^2.
double SumSquaredCounts(std::span<const int64_t> samples) {
  absl::flat_hash_map<int64_t, int64_t> counts;
  for (int64_t x : samples) ++counts[x];
  double total = 0.0;
  for (const auto& [value, c] : counts) {
    total += static_cast<double>(c) * static_cast<double>(c);
  }
  return total;
}

absl::Status ValidateEpsDelta(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must lie in (0, 1], got ", epsilon));
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1], got ", delta));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> UStatistic(std::span<const int64_t> samples) {
  if (samples.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "U-statistic needs at least 2 samples, got ", samples.size()));
  }
  const double n = static_cast<double>(samples.size());
  return (SumSquaredCounts(samples) - n) / (n * (n - 1.0));
}

absl::StatusOr<double> PlugIn(std::span<const int64_t> samples) {
  if (samples.empty()) {
    return absl::InvalidArgumentError("plug-in estimate needs samples");
  }
  const double n = static_cast<double>(samples.size());
  return SumSquaredCounts(samples) / (n * n);
}

absl::StatusOr<int64_t> PlugInSampleSize(double epsilon, double delta,
                                         double f32_bound) {
  RETURN_IF_ERROR(ValidateEpsDelta(epsilon, delta));
  if (!(f32_bound > 0.0)) {
    return absl::InvalidArgumentError("F_{3/2} bound must be positive");
  }
  const double dominant =
      std::max(200.0 * f32_bound * f32_bound, std::log(2.0 / delta));
  return CeilFormula(8.0 / (epsilon * epsilon) * dominant);
}

absl::StatusOr<int64_t> UStatisticSampleSize(double epsilon, double delta,
                                             double variance_bound) {
  RETURN_IF_ERROR(ValidateEpsDelta(epsilon, delta));
  if (!(variance_bound >= 0.0)) {
    return absl::InvalidArgumentError("variance bound must be >= 0");
  }
  const double log_term = std::log(4.0 / delta);
  const double variance_part =
      32.0 * variance_bound * log_term / (epsilon * epsilon);
  const double range_part = (128.0 + 1.0 / 6.0) * log_term / epsilon;
  return CeilFormula(std::max(variance_part, range_part));
}

absl::StatusOr<int64_t> BatchSampleSize(const BatchSampleSizeSpec& spec) {
  switch (spec.estimator) {
    case BatchEstimator::kPlugIn:
      return PlugInSampleSize(spec.epsilon, spec.delta,
                              spec.f32_bound.value_or(1.0));
    case BatchEstimator::kUStatistic:
      return UStatisticSampleSize(spec.epsilon, spec.delta,
                                  spec.variance_bound.value_or(1.0));
  }
  return absl::InvalidArgumentError("unknown batch estimator");
}

absl::StatusOr<BatchOutcome> BatchTest(const DiscreteDistribution& d,
                                       double c0,
                                       const BatchSampleSizeSpec& spec,
                                       Rng& rng) {
  ASSIGN_OR_RETURN(int64_t n, BatchSampleSize(spec));
  n = std::max<int64_t>(n, 2);
  std::vector<int64_t> samples(n);
  for (int64_t& x : samples) x = d.Sample(rng);
  BatchOutcome outcome;
  outcome.samples = n;
  if (spec.estimator == BatchEstimator::kPlugIn) {
    ASSIGN_OR_RETURN(outcome.estimate, PlugIn(samples));
  } else {
    ASSIGN_OR_RETURN(outcome.estimate, UStatistic(samples));
  }
  outcome.rejected = std::abs(outcome.estimate - c0) > spec.epsilon / 2.0;
  return outcome;
}

}  // namespace collider
