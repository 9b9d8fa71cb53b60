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

#include "collider/distribution.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace collider {
namespace {

absl::Status CheckSupportSize(int64_t k) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("support size must be >= 1, got ", k));
  }
  return absl::OkStatus();
}

absl::Status CheckSameSupport(const DiscreteDistribution& a,
                              const DiscreteDistribution& b) {
  if (a.support_size() != b.support_size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("support sizes differ: ", a.support_size(), " vs ",
                     b.support_size()));
  }
  return absl::OkStatus();
}

}  // namespace

double StableSum(std::span<const double> values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

absl::StatusOr<DiscreteDistribution> DiscreteDistribution::FromWeights(
    std::vector<double> weights) {
  if (weights.empty()) {
    return absl::InvalidArgumentError("distribution needs at least one weight");
  }
  for (size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("weight ", i + 1, " is negative or not finite"));
    }
  }
  const double total = StableSum(weights);
  if (!(total > 0.0)) {
    return absl::InvalidArgumentError("weights sum to zero");
  }
  for (double& w : weights) w /= total;

  // Running compensated prefix sums. Entries at or after the last positive
  // probability are pinned to 1 so a uniform draw can never land on a
  // trailing zero-probability element.
  std::vector<double> cdf(weights.size());
  double sum = 0.0;
  double compensation = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double y = weights[i] - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    cdf[i] = sum;
    if (weights[i] > 0.0) last_positive = i;
  }
  std::fill(cdf.begin() + last_positive, cdf.end(), 1.0);
  return DiscreteDistribution(std::move(weights), std::move(cdf));
}

absl::StatusOr<DiscreteDistribution> DiscreteDistribution::Uniform(int64_t k) {
  if (absl::Status s = CheckSupportSize(k); !s.ok()) return s;
  return FromWeights(std::vector<double>(k, 1.0));
}

absl::StatusOr<DiscreteDistribution> DiscreteDistribution::PowerLaw(int64_t k) {
  if (absl::Status s = CheckSupportSize(k); !s.ok()) return s;
  std::vector<double> weights(k);
  for (int64_t i = 0; i < k; ++i) weights[i] = 1.0 / static_cast<double>(i + 1);
  return FromWeights(std::move(weights));
}

absl::StatusOr<DiscreteDistribution> DiscreteDistribution::Exponential(
    int64_t k) {
  if (absl::Status s = CheckSupportSize(k); !s.ok()) return s;
  // exp(-i) / sum_j exp(-j) == exp(-(i-1)) / sum_j exp(-(j-1)); the shifted
  // form keeps the first weight at 1. Weights past ~745 underflow to 0.
  std::vector<double> weights(k);
  for (int64_t i = 0; i < k; ++i) weights[i] = std::exp(-static_cast<double>(i));
  return FromWeights(std::move(weights));
}

int64_t DiscreteDistribution::Sample(Rng& rng) const {
  const double u = rng.Uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int64_t>(it - cdf_.begin()) + 1;
}

absl::StatusOr<TwoPointPair> MakeTwoPointPair(int64_t support_size,
                                              double tau) {
  if (support_size < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("two-point pair needs K >= 2, got ", support_size));
  }
  if (!(tau > 0.0 && tau < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tau must lie in (0, 1), got ", tau));
  }
  const double spread = 2.0 * static_cast<double>(support_size - 1);
  std::vector<double> w0(support_size, 1.0 / spread);
  std::vector<double> w1(support_size, (1.0 - tau) / spread);
  w0.back() = 0.5;
  w1.back() = (1.0 + tau) / 2.0;
  auto p0 = DiscreteDistribution::FromWeights(std::move(w0));
  if (!p0.ok()) return p0.status();
  auto p1 = DiscreteDistribution::FromWeights(std::move(w1));
  if (!p1.ok()) return p1.status();
  return TwoPointPair{*std::move(p0), *std::move(p1), tau, support_size};
}

double CollisionProbability(const DiscreteDistribution& d) {
  std::vector<double> squares(d.probs().begin(), d.probs().end());
  for (double& p : squares) p *= p;
  return StableSum(squares);
}

absl::StatusOr<double> FrequencyMoment(const DiscreteDistribution& d,
                                       double order) {
  if (!(order > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("frequency moment order must be > 0, got ", order));
  }
  std::vector<double> terms(d.probs().begin(), d.probs().end());
  for (double& p : terms) p = p > 0.0 ? std::pow(p, order) : 0.0;
  return StableSum(terms);
}

absl::StatusOr<double> TvDistance(const DiscreteDistribution& a,
                                  const DiscreteDistribution& b) {
  if (absl::Status s = CheckSameSupport(a, b); !s.ok()) return s;
  std::vector<double> gaps(a.support_size());
  for (int64_t i = 0; i < a.support_size(); ++i) {
    gaps[i] = std::abs(a.probs()[i] - b.probs()[i]);
  }
  return 0.5 * StableSum(gaps);
}

absl::StatusOr<double> KlDivergence(const DiscreteDistribution& a,
                                    const DiscreteDistribution& b) {
  if (absl::Status s = CheckSameSupport(a, b); !s.ok()) return s;
  std::vector<double> terms(a.support_size(), 0.0);
  for (int64_t i = 0; i < a.support_size(); ++i) {
    const double p = a.probs()[i];
    const double q = b.probs()[i];
    if (p == 0.0) continue;
    if (q == 0.0) {
      return absl::OutOfRangeError(absl::StrCat(
          "KL divergence undefined: element ", i + 1,
          " has positive mass under the first distribution only"));
    }
    terms[i] = p * std::log(p / q);
  }
  // Rounding can push an exact zero slightly negative.
  return std::max(0.0, StableSum(terms));
}

}  // namespace collider
