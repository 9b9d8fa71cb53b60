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

#include "collider/sequential_tester.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "collider/status_macros.h"

namespace collider {

absl::StatusOr<double> Threshold(int64_t i, double delta) {
  if (i < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("threshold needs i >= 2, got ", i));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  const double n = static_cast<double>(i);
  // ln ln i is negative below e^e; clamp it at 0.
  const double loglog = std::max(0.0, std::log(std::log(n)));
  return 3.2 * std::sqrt((loglog + 0.72 * std::log(20.8 / delta)) / n);
}

absl::StatusOr<SequentialTester> SequentialTester::Create(double c0,
                                                          double delta) {
  return Create(c0, delta, Options());
}

absl::StatusOr<SequentialTester> SequentialTester::Create(double c0,
                                                          double delta,
                                                          Options options) {
  if (!(c0 >= 0.0 && c0 <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("c0 must lie in [0, 1], got ", c0));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (!(options.threshold_scale > 0.0)) {
    return absl::InvalidArgumentError("threshold scale must be positive");
  }
  return SequentialTester(c0, delta, options);
}

double SequentialTester::t_cumsum() const {
  // sum_{j<=i} (j - 1) = i (i - 1) / 2.
  const double pairs = 0.5 * static_cast<double>(samples_) *
                       static_cast<double>(samples_ - 1);
  return static_cast<double>(collisions_) - centering_factor() * c0_ * pairs;
}

double SequentialTester::statistic() const {
  if (samples_ < 2) return 0.0;
  const double pairs = 0.5 * static_cast<double>(samples_) *
                       static_cast<double>(samples_ - 1);
  return static_cast<double>(collisions_) / pairs - centering_factor() * c0_;
}

absl::StatusOr<bool> SequentialTester::Update(int64_t x) {
  if (rejected_) {
    return absl::FailedPreconditionError(
        "update after the null hypothesis was rejected");
  }
  ++samples_;
  int64_t& count = counts_[x];
  collisions_ += count;  // matches with every earlier copy of x
  ++count;
  if (samples_ < 2) return false;
  ASSIGN_OR_RETURN(double threshold, Threshold(samples_, delta_));
  rejected_ = std::abs(statistic()) > options_.threshold_scale * threshold;
  return rejected_;
}

absl::StatusOr<Verdict> RunSequentialTest(const DiscreteDistribution& d,
                                          double c0, double delta,
                                          int64_t budget, Rng& rng,
                                          NullCentering centering) {
  if (budget < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget must be >= 2, got ", budget));
  }
  ASSIGN_OR_RETURN(
      SequentialTester tester,
      SequentialTester::Create(c0, delta, {.centering = centering}));
  Verdict verdict;
  while (tester.samples() < budget) {
    ASSIGN_OR_RETURN(bool rejected, tester.Update(d.Sample(rng)));
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

}  // namespace collider
