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

#ifndef COLLIDER_SEQUENTIAL_TESTER_H_
#define COLLIDER_SEQUENTIAL_TESTER_H_

#include <cstdint>
#include <optional>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "collider/distribution.h"
#include "collider/random.h"

namespace collider {

// 3.2 * sqrt((max(ln ln i, 0) + 0.72 ln(20.8 / delta)) / i). Requires i >= 2
// and delta in (0, 1).
absl::StatusOr<double> Threshold(int64_t i, double delta);

// How each increment T_i is centered on the null value c0.
//   kProof:    T_i = #{j < i : x_j = x_i} - (i - 1) c0,
//              so 2/(i(i-1)) sum T_j = U_i - c0.
//   kVerbatim: T_i = #{j < i : x_j = x_i} - 2 (i - 1) c0,
//              so 2/(i(i-1)) sum T_j = U_i - 2 c0.
// U_i is the all-pairs collision frequency of the first i samples. Only the
// kProof statistic is centered at zero under the null; kVerbatim is kept for
// comparison and rejects true nulls with c0 above the threshold.
enum class NullCentering { kProof, kVerbatim };

struct Verdict {
  bool rejected = false;
  // Samples seen when the null was rejected (>= 2); empty otherwise.
  std::optional<int64_t> n_at_decision;
  // Samples drawn in total.
  int64_t samples = 0;
  // True when the run stopped because the sample budget ran out.
  bool budget_exhausted = false;
  // 2/(i(i-1)) sum T_j at the last processed sample (0 before i = 2).
  double statistic = 0.0;
};

// Anytime test of H0: C(p) = c0. Keeps per-value counts and the running
// number of colliding pairs, so each update is O(1) amortized.
class SequentialTester {
 public:
  struct Options {
    NullCentering centering = NullCentering::kProof;
    // Multiplies the threshold; 1 for the plain tester.
    double threshold_scale = 1.0;
  };

  static absl::StatusOr<SequentialTester> Create(double c0, double delta);
  static absl::StatusOr<SequentialTester> Create(double c0, double delta,
                                                 Options options);

  // Feeds the next sample. Returns true if the null is rejected at this
  // sample. FailedPrecondition once the tester has already rejected.
  absl::StatusOr<bool> Update(int64_t x);

  double c0() const { return c0_; }
  double delta() const { return delta_; }
  int64_t samples() const { return samples_; }
  // Number of pairs j < l with x_j = x_l among the samples so far.
  int64_t collisions() const { return collisions_; }
  // sum_{j <= i} T_j.
  double t_cumsum() const;
  // 2/(i(i-1)) * t_cumsum(), 0 when fewer than two samples were seen.
  double statistic() const;
  bool rejected() const { return rejected_; }
  const absl::flat_hash_map<int64_t, int64_t>& counts() const {
    return counts_;
  }

 private:
  SequentialTester(double c0, double delta, Options options)
      : c0_(c0), delta_(delta), options_(options) {}

  double centering_factor() const {
    return options_.centering == NullCentering::kProof ? 1.0 : 2.0;
  }

  double c0_;
  double delta_;
  Options options_;
  int64_t samples_ = 0;
  int64_t collisions_ = 0;
  bool rejected_ = false;
  absl::flat_hash_map<int64_t, int64_t> counts_;
};

// Draws samples from `d` until rejection or until `budget` samples were used.
absl::StatusOr<Verdict> RunSequentialTest(
    const DiscreteDistribution& d, double c0, double delta, int64_t budget,
    Rng& rng, NullCentering centering = NullCentering::kProof);

}  // namespace collider

#endif  // COLLIDER_SEQUENTIAL_TESTER_H_
