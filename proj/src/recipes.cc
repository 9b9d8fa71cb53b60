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

#include <cmath>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "collider/dist_spec.h"
#include "collider/distribution.h"
#include "collider/harness.h"
#include "collider/status_macros.h"

// Desk-scale versions of the five experiment families. "smoke" keeps the
// same shapes with two trials and small budgets so the CLI can be exercised
// in seconds.

namespace collider {
namespace {

struct Scale {
  bool smoke;
  int64_t Trials(int64_t desk) const { return smoke ? 2 : desk; }
  int64_t Budget(int64_t desk) const { return smoke ? std::min<int64_t>(desk, 20000) : desk; }
  int64_t Users(int64_t desk) const { return smoke ? std::min<int64_t>(desk, 20000) : desk; }
  int Rounds(int desk) const { return smoke ? 2 : desk; }
};

double TrueCollision(const std::string& text) {
  return CollisionProbability(ParseDistributionSpec(text)->distribution);
}

uint64_t RecipeSeed(int figure, size_t index) {
  return DeriveSeed(0xC011'1DE5'0000'0000ULL + figure, index);
}

// Private estimator vs. the k-RAPPOR indirect baseline, error against n.
std::vector<ExperimentConfig> Fig1(const Scale& scale) {
  std::vector<ExperimentConfig> configs;
  for (const char* dist : {"uniform:k=1000", "powerlaw:k=1000"}) {
    for (int64_t n : {int64_t{100000}, int64_t{300000}, int64_t{1000000}}) {
      for (Algorithm algorithm : {Algorithm::kMechanism, Algorithm::kKRappor}) {
        ExperimentConfig c;
        c.algorithm = algorithm;
        c.distribution = dist;
        c.n = scale.Users(n);
        c.alpha = 1.0;
        c.beta = 1e-5;
        c.delta = 0.1;
        c.epsilon = 1.0;
        c.trials = scale.Trials(10);
        configs.push_back(c);
      }
    }
  }
  return configs;
}

// Sequential tester vs. the doubling tester as the gap shrinks.
std::vector<ExperimentConfig> Fig2(const Scale& scale) {
  std::vector<ExperimentConfig> configs;
  for (const char* dist : {"powerlaw:k=1000", "exponential:k=10"}) {
    const double truth = TrueCollision(dist);
    for (double gap : {0.2, 0.1, 0.05}) {
      for (Algorithm algorithm : {Algorithm::kSeqTest, Algorithm::kDoubling}) {
        ExperimentConfig c;
        c.algorithm = algorithm;
        c.distribution = dist;
        c.c0 = truth + gap <= 1.0 ? truth + gap : truth - gap;
        c.delta = 0.1;
        c.alpha = 4.0;
        c.beta = 0.1;
        c.budget = scale.Budget(1000000);
        c.n0 = int64_t{1} << 13;
        c.max_rounds = scale.Rounds(9);
        c.trials = scale.Trials(algorithm == Algorithm::kDoubling ? 3 : 20);
        configs.push_back(c);
      }
    }
  }
  return configs;
}

// Sequential vs. batch testers over support sizes (the gap is 1/k - c0).
std::vector<ExperimentConfig> Fig3(const Scale& scale) {
  std::vector<ExperimentConfig> configs;
  for (int64_t k : LogSpaced(10, 10000, 20)) {
    const std::string dist = absl::StrCat("uniform:k=", k);
    ExperimentConfig seq;
    seq.algorithm = Algorithm::kSeqTest;
    seq.distribution = dist;
    seq.c0 = 0.0;
    seq.delta = 0.1;
    seq.budget = scale.Budget(1000000);
    seq.trials = scale.Trials(20);
    configs.push_back(seq);
    for (Algorithm algorithm :
         {Algorithm::kBatchUStatistic, Algorithm::kBatchPlugIn}) {
      ExperimentConfig batch = seq;
      batch.algorithm = algorithm;
      batch.epsilon = scale.smoke ? 0.5 : 0.05;
      batch.trials = scale.Trials(3);
      configs.push_back(batch);
    }
  }
  return configs;
}

// Plug-in vs. U-statistic error at fixed n.
std::vector<ExperimentConfig> Fig4(const Scale& scale) {
  std::vector<ExperimentConfig> configs;
  for (const char* dist : {"uniform:k=1000", "powerlaw:k=1000"}) {
    for (int64_t n : {int64_t{100}, int64_t{1000}, int64_t{10000}}) {
      for (Algorithm algorithm : {Algorithm::kPlugIn, Algorithm::kUStatistic}) {
        ExperimentConfig c;
        c.algorithm = algorithm;
        c.distribution = dist;
        c.n = n;
        c.trials = scale.Trials(500);
        configs.push_back(c);
      }
    }
  }
  return configs;
}

// Private sequential testers next to the non-private one.
std::vector<ExperimentConfig> Fig5(const Scale& scale) {
  std::vector<ExperimentConfig> configs;
  for (const char* dist : {"uniform:k=1000", "powerlaw:k=1000"}) {
    const double truth = TrueCollision(dist);
    for (double gap : {0.5, 0.2}) {
      for (Algorithm algorithm :
           {Algorithm::kSeqTest, Algorithm::kPsq, Algorithm::kDoubling}) {
        ExperimentConfig c;
        c.algorithm = algorithm;
        c.distribution = dist;
        c.c0 = truth + gap;
        c.delta = 0.1;
        c.alpha = 4.0;
        c.beta = 0.1;
        c.budget = scale.Budget(algorithm == Algorithm::kPsq ? 2000000 : 1000000);
        c.n0 = int64_t{1} << 13;
        c.max_rounds = scale.Rounds(8);
        c.trials = scale.Trials(algorithm == Algorithm::kSeqTest ? 20 : 3);
        configs.push_back(c);
      }
    }
  }
  return configs;
}

}  // namespace

absl::StatusOr<std::vector<ExperimentConfig>> Recipe(absl::string_view name,
                                                     absl::string_view scale) {
  if (scale != "desk" && scale != "smoke") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown scale '", scale, "' (expected desk or smoke)"));
  }
  const Scale s{scale == "smoke"};
  std::vector<ExperimentConfig> configs;
  int figure = 0;
  if (name == "fig1") {
    configs = Fig1(s), figure = 1;
  } else if (name == "fig2") {
    configs = Fig2(s), figure = 2;
  } else if (name == "fig3") {
    configs = Fig3(s), figure = 3;
  } else if (name == "fig4") {
    configs = Fig4(s), figure = 4;
  } else if (name == "fig5") {
    configs = Fig5(s), figure = 5;
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown recipe '", name, "' (expected fig1 ... fig5)"));
  }
  for (size_t i = 0; i < configs.size(); ++i) {
    configs[i].base_seed = RecipeSeed(figure, i);
  }
  return configs;
}

}  // namespace collider
