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

#include "collider/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "collider/batch.h"
#include "collider/dist_spec.h"
#include "collider/distribution.h"
#include "collider/hash_channel.h"
#include "collider/private_estimator.h"
#include "collider/private_sequential.h"
#include "collider/random.h"
#include "collider/status_macros.h"

namespace collider {
namespace {

constexpr std::pair<Algorithm, absl::string_view> kAlgorithmNames[] = {
    {Algorithm::kMechanism, "mechanism"},
    {Algorithm::kKRappor, "krappor"},
    {Algorithm::kSeqTest, "seqtest"},
    {Algorithm::kPsq, "psq"},
    {Algorithm::kDoubling, "doubling"},
    {Algorithm::kBatchPlugIn, "batch_plugin"},
    {Algorithm::kBatchUStatistic, "batch_ustat"},
    {Algorithm::kPlugIn, "plugin"},
    {Algorithm::kUStatistic, "ustat"},
};

std::string FormatDouble(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string FormatOptional(const std::optional<double>& value) {
  return value.has_value() ? FormatDouble(*value) : std::string();
}

const char* SequentialVerdict(const Verdict& v) {
  return v.rejected ? "reject" : "no_reject";
}

absl::StatusOr<RunRecord> RunTrial(const ExperimentConfig& config,
                                   const DistributionSpec& spec,
                                   int64_t trial) {
  const DiscreteDistribution& d = spec.distribution;
  const double truth = CollisionProbability(d);
  const PrivacyParams params{config.alpha, config.beta};

  RunRecord record;
  record.algorithm = std::string(AlgorithmName(config.algorithm));
  record.distribution = spec.text;
  record.k = d.support_size();
  record.trial = trial;
  record.seed = DeriveSeed(config.base_seed, static_cast<uint64_t>(trial));
  Rng rng(record.seed);

  auto set_estimate = [&](double estimate) {
    if (config.clamp) estimate = std::clamp(estimate, 0.0, 1.0);
    record.estimate = estimate;
    record.abs_error = std::abs(estimate - truth);
  };

  const auto start = std::chrono::steady_clock::now();
  switch (config.algorithm) {
    case Algorithm::kMechanism: {
      int64_t n = config.n;
      if (n == 0) {
        ASSIGN_OR_RETURN(n, RecommendedUsers(config.c_lower, config.epsilon,
                                             config.delta, params));
      }
      ASSIGN_OR_RETURN(MechanismPlan plan, PlanMechanism(n, config.epsilon,
                                                         config.delta, params));
      ASSIGN_OR_RETURN(HashChannel channel,
                       HashChannel::Create(params, RandomKey(rng)));
      ASSIGN_OR_RETURN(EstimateResult result,
                       RunMechanism(plan, channel, d, rng));
      record.alpha = config.alpha;
      record.beta = config.beta;
      record.eps = config.epsilon;
      record.delta = config.delta;
      record.n_samples = result.users_consumed;
      set_estimate(result.c_hat);
      break;
    }
    case Algorithm::kKRappor: {
      ASSIGN_OR_RETURN(double estimate,
                       KRapporIndirectEstimate(d, config.n, config.alpha, rng));
      record.alpha = config.alpha;
      record.n_samples = config.n;
      set_estimate(estimate);
      break;
    }
    case Algorithm::kSeqTest: {
      ASSIGN_OR_RETURN(Verdict v,
                       RunSequentialTest(d, config.c0, config.delta,
                                         config.budget, rng, config.centering));
      record.eps = std::abs(truth - config.c0);
      record.delta = config.delta;
      record.n_samples = v.samples;
      record.verdict = SequentialVerdict(v);
      break;
    }
    case Algorithm::kPsq: {
      ASSIGN_OR_RETURN(Verdict v, RunPsq(d, config.c0, config.delta, params,
                                         config.budget, rng, config.centering));
      record.alpha = config.alpha;
      record.beta = config.beta;
      record.eps = std::abs(truth - config.c0);
      record.delta = config.delta;
      record.n_samples = v.samples;
      record.verdict = SequentialVerdict(v);
      break;
    }
    case Algorithm::kDoubling: {
      DoublingOptions options;
      options.n0 = config.n0;
      options.max_rounds = config.max_rounds;
      options.c_lower = config.c_lower > 0.0 ? config.c_lower : config.c0;
      ASSIGN_OR_RETURN(DoublingResult result,
                       RunDoubling(d, config.c0, config.delta, params, options,
                                   rng));
      record.alpha = config.alpha;
      record.beta = config.beta;
      record.eps = std::abs(truth - config.c0);
      record.delta = config.delta;
      record.n_samples = result.verdict.samples;
      record.verdict = SequentialVerdict(result.verdict);
      set_estimate(result.history.back().c_hat);
      break;
    }
    case Algorithm::kBatchPlugIn:
    case Algorithm::kBatchUStatistic: {
      BatchSampleSizeSpec size_spec;
      size_spec.estimator = config.algorithm == Algorithm::kBatchPlugIn
                                ? BatchEstimator::kPlugIn
                                : BatchEstimator::kUStatistic;
      size_spec.epsilon = config.epsilon;
      size_spec.delta = config.delta;
      size_spec.f32_bound = config.f32_bound;
      size_spec.variance_bound = config.variance_bound;
      ASSIGN_OR_RETURN(BatchOutcome outcome,
                       BatchTest(d, config.c0, size_spec, rng));
      record.eps = config.epsilon;
      record.delta = config.delta;
      record.n_samples = outcome.samples;
      record.verdict = outcome.rejected ? "reject" : "accept";
      set_estimate(outcome.estimate);
      break;
    }
    case Algorithm::kPlugIn:
    case Algorithm::kUStatistic: {
      std::vector<int64_t> samples(std::max<int64_t>(config.n, 0));
      for (int64_t& x : samples) x = d.Sample(rng);
      double estimate = 0.0;
      if (config.algorithm == Algorithm::kPlugIn) {
        ASSIGN_OR_RETURN(estimate, PlugIn(samples));
      } else {
        ASSIGN_OR_RETURN(estimate, UStatistic(samples));
      }
      record.n_samples = config.n;
      set_estimate(estimate);
      break;
    }
  }
  record.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return record;
}

double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ExperimentSummary SummarizeRecords(std::span<const RunRecord> records) {
  ExperimentSummary summary;
  std::vector<double> samples;
  std::vector<double> errors;
  for (const RunRecord& r : records) {
    samples.push_back(static_cast<double>(r.n_samples));
    if (r.abs_error.has_value()) errors.push_back(*r.abs_error);
    summary.rejections += r.verdict.has_value() && *r.verdict == "reject";
  }
  summary.n_samples = Summarize(samples);
  if (!errors.empty()) summary.abs_error = Summarize(errors);
  return summary;
}

}  // namespace

absl::string_view AlgorithmName(Algorithm algorithm) {
  for (const auto& [a, name] : kAlgorithmNames) {
    if (a == algorithm) return name;
  }
  return "unknown";
}

absl::StatusOr<Algorithm> ParseAlgorithm(absl::string_view name) {
  for (const auto& [a, known] : kAlgorithmNames) {
    if (known == name) return a;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown algorithm '", name, "'"));
}

absl::Status ExperimentConfig::Validate() const {
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("trials must be >= 1, got ", trials));
  }
  return ParseDistributionSpec(distribution).status();
}

std::string FormatCsvRow(const RunRecord& r) {
  return absl::StrJoin(
      {r.algorithm, r.distribution, absl::StrCat(r.k), FormatOptional(r.alpha),
       FormatOptional(r.beta), FormatOptional(r.eps), FormatOptional(r.delta),
       absl::StrCat(r.trial), absl::StrCat(r.seed), absl::StrCat(r.n_samples),
       FormatOptional(r.estimate), FormatOptional(r.abs_error),
       r.verdict.value_or(""), FormatDouble(r.wall_time_ms)},
      ",");
}

SummaryStats Summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = static_cast<int64_t>(values.size());
  if (values.empty()) return s;
  s.mean = StableSum(values) / static_cast<double>(s.count);
  if (s.count > 1) {
    std::vector<double> squares(values.begin(), values.end());
    for (double& v : squares) v = (v - s.mean) * (v - s.mean);
    const double variance = StableSum(squares) / static_cast<double>(s.count - 1);
    s.std_error = std::sqrt(variance / static_cast<double>(s.count));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.q10 = Quantile(sorted, 0.1);
  s.q50 = Quantile(sorted, 0.5);
  s.q90 = Quantile(sorted, 0.9);
  return s;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  ASSIGN_OR_RETURN(DistributionSpec spec,
                   ParseDistributionSpec(config.distribution));

  ExperimentResult result;
  result.records.resize(config.trials);
  std::atomic<int64_t> next{0};
  std::mutex error_mutex;
  absl::Status first_error;

  auto worker = [&] {
    for (int64_t t = next++; t < config.trials; t = next++) {
      absl::StatusOr<RunRecord> record = RunTrial(config, spec, t);
      if (!record.ok()) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.ok()) first_error = record.status();
        next = config.trials;
        return;
      }
      result.records[t] = *std::move(record);
    }
  };
  const int64_t workers = std::min<int64_t>(
      config.trials, std::max(1u, std::thread::hardware_concurrency()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  RETURN_IF_ERROR(first_error);
  result.summary = SummarizeRecords(result.records);
  return result;
}

absl::Status Sweep(std::span<const ExperimentConfig> configs,
                   std::ostream& out,
                   std::vector<ExperimentSummary>* summaries) {
  out << kCsvHeader << '\n';
  for (size_t i = 0; i < configs.size(); ++i) {
    absl::StatusOr<ExperimentResult> result = RunExperiment(configs[i]);
    if (!result.ok()) {
      out.flush();
      return absl::Status(result.status().code(),
                          absl::StrCat("config ", i, ": ",
                                       result.status().message()));
    }
    for (const RunRecord& record : result->records) {
      out << FormatCsvRow(record) << '\n';
    }
    out.flush();
    if (summaries != nullptr) summaries->push_back(result->summary);
  }
  if (!out) return absl::DataLossError("CSV stream went bad while writing");
  return absl::OkStatus();
}

absl::Status SweepToFile(std::span<const ExperimentConfig> configs,
                         const std::string& path,
                         std::vector<ExperimentSummary>* summaries) {
  std::ofstream out(path);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot open '", path, "' for writing"));
  }
  absl::Status status = Sweep(configs, out, summaries);
  if (!status.ok()) {
    return absl::Status(status.code(),
                        absl::StrCat(path, ": ", status.message()));
  }
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrCat("failed writing '", path, "'"));
  }
  return absl::OkStatus();
}

std::vector<int64_t> LogSpaced(int64_t lo, int64_t hi, int count) {
  std::vector<int64_t> values;
  if (count == 1) return {lo};
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (int i = 0; i < count; ++i) {
    const double v = std::exp(a + (b - a) * i / (count - 1));
    values.push_back(static_cast<int64_t>(std::llround(v)));
  }
  values.front() = lo;
  values.back() = hi;
  return values;
}

}  // namespace collider
