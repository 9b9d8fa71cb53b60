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

#ifndef COLLIDER_HARNESS_H_
#define COLLIDER_HARNESS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "collider/sequential_tester.h"

namespace collider {

enum class Algorithm {
  kMechanism,        // private estimator
  kKRappor,          // indirect k-RAPPOR baseline
  kSeqTest,          // non-private sequential tester
  kPsq,              // private sequential tester
  kDoubling,         // doubling tester over the private estimator
  kBatchPlugIn,      // testing by learning, plug-in estimate
  kBatchUStatistic,  // testing by learning, U-statistic estimate
  kPlugIn,           // plug-in estimate from a fixed n
  kUStatistic,       // U-statistic estimate from a fixed n
};

absl::string_view AlgorithmName(Algorithm algorithm);
absl::StatusOr<Algorithm> ParseAlgorithm(absl::string_view name);

// One experiment: `trials` independent runs of one algorithm on one
// distribution. Fields that do not apply to the algorithm are ignored.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kSeqTest;
  std::string distribution = "uniform:k=10";
  double c0 = 0.0;
  // eps_rel for kMechanism, epsilon for the batch testers.
  double epsilon = 1.0;
  double delta = 0.1;
  double alpha = 1.0;
  double beta = 0.01;
  // Users (kMechanism, kKRappor) or samples (kPlugIn, kUStatistic). For
  // kMechanism, 0 means RecommendedUsers(c_lower, ...).
  int64_t n = 0;
  // kMechanism: lower bound on C(p) for the recommended n.
  // kDoubling: 0 means "use c0".
  double c_lower = 0.0;
  int64_t budget = 100000;  // kSeqTest, kPsq
  int64_t n0 = int64_t{1} << 13;
  int max_rounds = 10;
  std::optional<double> f32_bound;
  std::optional<double> variance_bound;
  NullCentering centering = NullCentering::kProof;
  bool clamp = false;  // clamp estimates to [0, 1] before reporting
  int64_t trials = 1;
  uint64_t base_seed = 0;

  absl::Status Validate() const;
};

// One CSV row. Optional fields are written as empty strings.
struct RunRecord {
  std::string algorithm;
  std::string distribution;
  int64_t k = 0;
  std::optional<double> alpha;
  std::optional<double> beta;
  // eps_rel (kMechanism), epsilon (batch testers) or the gap |C(p) - c0|
  // (sequential testers).
  std::optional<double> eps;
  std::optional<double> delta;
  int64_t trial = 0;
  uint64_t seed = 0;
  int64_t n_samples = 0;
  std::optional<double> estimate;
  std::optional<double> abs_error;
  std::optional<std::string> verdict;  // "reject", "accept" or "no_reject"
  double wall_time_ms = 0.0;
};

inline constexpr absl::string_view kCsvHeader =
    "algorithm,distribution,k,alpha,beta,eps,delta,trial,seed,n_samples,"
    "estimate,abs_error,verdict,wall_time_ms";

std::string FormatCsvRow(const RunRecord& record);

// Mean, standard error (sample sd / sqrt(count)) and linearly interpolated
// 10/50/90% quantiles.
struct SummaryStats {
  int64_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double q10 = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
};

SummaryStats Summarize(std::span<const double> values);

struct ExperimentSummary {
  SummaryStats n_samples;
  std::optional<SummaryStats> abs_error;
  int64_t rejections = 0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by trial index
  ExperimentSummary summary;
};

// Trial t runs with seed DeriveSeed(base_seed, t). Trials are spread over
// hardware threads; the records do not depend on the schedule.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config);

// Runs the configs in order and streams the header plus every row to `out`,
// ordered by (config index, trial index). On a failing config the rows of
// the configs that completed are already written and the error is returned.
absl::Status Sweep(std::span<const ExperimentConfig> configs,
                   std::ostream& out,
                   std::vector<ExperimentSummary>* summaries = nullptr);

absl::Status SweepToFile(std::span<const ExperimentConfig> configs,
                         const std::string& path,
                         std::vector<ExperimentSummary>* summaries = nullptr);

// Pre-registered sweeps: name in {fig1, ..., fig5}, scale in {desk, smoke}.
absl::StatusOr<std::vector<ExperimentConfig>> Recipe(absl::string_view name,
                                                     absl::string_view scale);

// `count` integers log-spaced between `lo` and `hi` inclusive (rounded).
std::vector<int64_t> LogSpaced(int64_t lo, int64_t hi, int count);

}  // namespace collider

#endif  // COLLIDER_HARNESS_H_
