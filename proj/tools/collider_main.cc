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

// Command-line front end: privacy audit, single-algorithm runs, and
// pre-registered experiment sweeps. Every run subcommand writes the common
// CSV schema and prints per-config summaries.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "collider/config.h"
#include "collider/harness.h"
#include "collider/hash_channel.h"
#include "collider/random.h"
#include "collider/status_macros.h"

namespace collider {
namespace {

struct CommonFlags {
  std::string dist = "uniform:k=10";
  int64_t trials = 1;
  uint64_t seed = 0;
  std::string out;  // empty: stdout
  bool clamp = false;
};

void AddCommon(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--dist", flags.dist,
                  "uniform:k=K | powerlaw:k=K | exponential:k=K | "
                  "twopoint:k=K,tau=T,side=0|1")
      ->capture_default_str();
  cmd->add_option("--trials", flags.trials, "independent trials")
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "base seed")->capture_default_str();
  cmd->add_option("--out", flags.out, "CSV output path (default stdout)");
}

std::string FormatStats(const SummaryStats& s) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer),
                "mean %.6g (se %.3g), q10 %.6g, q50 %.6g, q90 %.6g", s.mean,
                s.std_error, s.q10, s.q50, s.q90);
  return buffer;
}

void PrintSummaries(std::span<const ExperimentConfig> configs,
                    const std::vector<ExperimentSummary>& summaries) {
  for (size_t i = 0; i < summaries.size(); ++i) {
    const ExperimentConfig& c = configs[i];
    const ExperimentSummary& s = summaries[i];
    std::cerr << "[" << i << "] " << AlgorithmName(c.algorithm) << " "
              << c.distribution << " (" << c.trials << " trials)\n"
              << "    n_samples: " << FormatStats(s.n_samples) << "\n";
    if (s.abs_error.has_value()) {
      std::cerr << "    abs_error: " << FormatStats(*s.abs_error) << "\n";
    }
    std::cerr << "    rejections: " << s.rejections << "/" << c.trials << "\n";
  }
}

absl::Status RunConfigs(const std::vector<ExperimentConfig>& configs,
                        const std::string& out) {
  for (size_t i = 0; i < configs.size(); ++i) {
    const absl::Status valid = configs[i].Validate();
    if (!valid.ok()) {
      return absl::Status(valid.code(),
                          absl::StrCat("config ", i, ": ", valid.message()));
    }
  }
  std::vector<ExperimentSummary> summaries;
  absl::Status status;
  if (out.empty()) {
    status = Sweep(configs, std::cout, &summaries);
  } else {
    status = SweepToFile(configs, out, &summaries);
  }
  PrintSummaries(configs, summaries);
  return status;
}

ExperimentConfig BaseConfig(Algorithm algorithm, const CommonFlags& flags) {
  ExperimentConfig c;
  c.algorithm = algorithm;
  c.distribution = flags.dist;
  c.trials = flags.trials;
  c.base_seed = flags.seed;
  c.clamp = flags.clamp;
  return c;
}

// Minimal gnuplot script for a sweep CSV: one series per algorithm, samples
// or error against the eps column.
std::string PlotScript(const std::string& csv, const std::string& recipe) {
  const bool error_plot = recipe == "fig1" || recipe == "fig4";
  return absl::StrCat(
      "# gnuplot script stub for ", csv, "\n",
      "set datafile separator ','\n",
      "set key autotitle columnhead\n",
      "set logscale xy\n",
      "set xlabel '", error_plot ? "n_samples" : "eps", "'\n",
      "set ylabel '", error_plot ? "abs_error" : "n_samples", "'\n",
      "plot '", csv, "' using ", error_plot ? "10:12" : "6:10",
      " with points title '", recipe, "'\n");
}

absl::Status RunExperimentCommand(const std::string& recipe,
                                  const std::string& config_path,
                                  const std::string& scale,
                                  const std::string& out_dir,
                                  bool plot_script) {
  std::vector<ExperimentConfig> configs;
  std::string stem;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      return absl::NotFoundError(
          absl::StrCat("cannot read config '", config_path, "'"));
    }
    std::stringstream text;
    text << in.rdbuf();
    absl::StatusOr<std::vector<ExperimentConfig>> parsed =
        ParseSweepConfig(text.str());
    if (!parsed.ok()) {
      return absl::Status(parsed.status().code(),
                          absl::StrCat(config_path, ": ",
                                       parsed.status().message()));
    }
    configs = *std::move(parsed);
    stem = std::filesystem::path(config_path).stem().string();
  } else {
    ASSIGN_OR_RETURN(configs, Recipe(recipe, scale));
    stem = recipe;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create output directory '", out_dir, "': ", ec.message()));
  }
  const std::string csv = (std::filesystem::path(out_dir) / (stem + ".csv")).string();
  RETURN_IF_ERROR(RunConfigs(configs, csv));
  std::cerr << "wrote " << csv << "\n";
  if (plot_script) {
    const std::string gp =
        (std::filesystem::path(out_dir) / (stem + ".gp")).string();
    std::ofstream script(gp);
    script << PlotScript(stem + ".csv", stem);
    if (!script) return absl::DataLossError(absl::StrCat("failed writing '", gp, "'"));
    std::cerr << "wrote " << gp << "\n";
  }
  return absl::OkStatus();
}

int Report(const absl::Status& status) {
  if (status.ok()) return 0;
  std::cerr << "error: " << status << "\n";
  return 1;
}

int Main(int argc, char** argv) {
  CLI::App app{"Collision-probability estimation and testing toolkit"};
  app.require_subcommand(1);

  // audit
  CLI::App* audit = app.add_subcommand("audit", "empirical privacy audit of the hash channel");
  double audit_alpha = std::log(3.0);
  double audit_beta = 0.04;
  int64_t audit_trials = 10000;
  uint64_t audit_seed = 0;
  uint64_t audit_x = 1;
  uint64_t audit_x_prime = 2;
  audit->add_option("--alpha", audit_alpha)->capture_default_str();
  audit->add_option("--beta", audit_beta)->capture_default_str();
  audit->add_option("--trials", audit_trials, "number of hash keys")->capture_default_str();
  audit->add_option("--seed", audit_seed)->capture_default_str();
  audit->add_option("--x", audit_x)->capture_default_str();
  audit->add_option("--x-prime", audit_x_prime)->capture_default_str();

  // estimate
  CommonFlags estimate_flags;
  CLI::App* estimate = app.add_subcommand("estimate", "private collision-probability estimate");
  AddCommon(estimate, estimate_flags);
  double est_alpha = 1.0, est_beta = 0.01, est_eps = 1.0, est_delta = 0.1;
  double est_c_lower = 0.0;
  int64_t est_n = 0;
  estimate->add_option("--alpha", est_alpha)->capture_default_str();
  estimate->add_option("--beta", est_beta)->capture_default_str();
  estimate->add_option("--eps-rel", est_eps)->capture_default_str();
  estimate->add_option("--delta", est_delta)->capture_default_str();
  CLI::Option* n_opt = estimate->add_option("--n", est_n, "expected users");
  CLI::Option* c_lower_opt = estimate->add_option(
      "--c-lower", est_c_lower, "lower bound on C(p); sets n to the recommended size");
  n_opt->excludes(c_lower_opt);
  estimate->add_flag("--clamp", estimate_flags.clamp, "clamp estimates to [0, 1]");
  bool est_krappor = false;
  estimate->add_flag("--krappor", est_krappor, "run the k-RAPPOR baseline instead (needs --n)");

  // seqtest
  CommonFlags seq_flags;
  CLI::App* seqtest = app.add_subcommand("seqtest", "non-private sequential test");
  AddCommon(seqtest, seq_flags);
  double seq_c0 = 0.0, seq_delta = 0.1;
  int64_t seq_budget = 1000000;
  std::string seq_centering = "proof";
  seqtest->add_option("--c0", seq_c0)->required();
  seqtest->add_option("--delta", seq_delta)->capture_default_str();
  seqtest->add_option("--budget", seq_budget)->capture_default_str();
  seqtest->add_option("--centering", seq_centering, "proof | verbatim")
      ->check(CLI::IsMember({"proof", "verbatim"}))
      ->capture_default_str();

  // psq
  CommonFlags psq_flags;
  CLI::App* psq = app.add_subcommand("psq", "private sequential test");
  AddCommon(psq, psq_flags);
  double psq_c0 = 0.0, psq_delta = 0.1, psq_alpha = 4.0, psq_beta = 0.1;
  int64_t psq_budget = 2000000;
  std::string psq_centering = "proof";
  psq->add_option("--c0", psq_c0)->required();
  psq->add_option("--alpha", psq_alpha)->capture_default_str();
  psq->add_option("--beta", psq_beta)->capture_default_str();
  psq->add_option("--delta", psq_delta)->capture_default_str();
  psq->add_option("--budget", psq_budget)->capture_default_str();
  psq->add_option("--centering", psq_centering, "proof | verbatim")
      ->check(CLI::IsMember({"proof", "verbatim"}))
      ->capture_default_str();

  // doubling
  CommonFlags dbl_flags;
  CLI::App* doubling = app.add_subcommand("doubling", "doubling tester over the private estimator");
  AddCommon(doubling, dbl_flags);
  double dbl_c0 = 0.0, dbl_delta = 0.1, dbl_alpha = 4.0, dbl_beta = 0.1;
  double dbl_c_lower = 0.0;
  int64_t dbl_n0 = int64_t{1} << 13;
  int dbl_rounds = 10;
  doubling->add_option("--c0", dbl_c0)->required();
  doubling->add_option("--alpha", dbl_alpha)->capture_default_str();
  doubling->add_option("--beta", dbl_beta)->capture_default_str();
  doubling->add_option("--delta", dbl_delta)->capture_default_str();
  doubling->add_option("--n0", dbl_n0)->capture_default_str();
  doubling->add_option("--max-rounds", dbl_rounds)->capture_default_str();
  doubling->add_option("--c-lower", dbl_c_lower, "lower bound on C(p) (default c0)");

  // batch
  CommonFlags batch_flags;
  CLI::App* batch = app.add_subcommand("batch", "testing by learning with a fixed batch");
  AddCommon(batch, batch_flags);
  double batch_c0 = 0.0, batch_eps = 0.1, batch_delta = 0.1;
  std::string batch_estimator = "ustat";
  std::optional<double> batch_f32;
  std::optional<double> batch_variance;
  batch->add_option("--c0", batch_c0)->required();
  batch->add_option("--epsilon", batch_eps)->capture_default_str();
  batch->add_option("--delta", batch_delta)->capture_default_str();
  batch->add_option("--estimator", batch_estimator, "plugin | ustat")
      ->check(CLI::IsMember({"plugin", "ustat"}))
      ->capture_default_str();
  batch->add_option("--f32-bound", batch_f32, "known bound on F_{3/2} (plug-in)");
  batch->add_option("--variance-bound", batch_variance, "known bound on F_3 - F_2^2 (U-statistic)");

  // experiment
  CLI::App* experiment = app.add_subcommand("experiment", "run a recipe or a TOML sweep");
  std::string exp_recipe;
  std::string exp_config;
  std::string exp_scale = "desk";
  std::string exp_out = "results";
  bool exp_plot = false;
  CLI::Option* recipe_opt =
      experiment->add_option("--recipe", exp_recipe, "fig1 | fig2 | fig3 | fig4 | fig5");
  CLI::Option* config_opt =
      experiment->add_option("--config", exp_config, "TOML file with [[run]] tables");
  recipe_opt->excludes(config_opt);
  experiment->add_option("--scale", exp_scale, "desk | smoke")->capture_default_str();
  experiment->add_option("--out", exp_out, "output directory")->capture_default_str();
  experiment->add_flag("--plot-script", exp_plot, "also write a gnuplot script stub");

  CLI11_PARSE(app, argc, argv);

  auto centering = [](const std::string& name) {
    return name == "verbatim" ? NullCentering::kVerbatim : NullCentering::kProof;
  };

  if (audit->parsed()) {
    Rng rng(audit_seed);
    absl::StatusOr<double> fraction = AuditPrivacy(
        {audit_alpha, audit_beta}, audit_trials, audit_x, audit_x_prime, rng);
    if (!fraction.ok()) return Report(fraction.status());
    const double slack = 3.0 * std::sqrt(audit_beta * (1.0 - audit_beta) /
                                         static_cast<double>(audit_trials));
    const bool pass = *fraction <= audit_beta + slack;
    std::printf("violation fraction %.6g over %lld keys (r = %lld); beta %.6g + slack %.3g: %s\n",
                *fraction, static_cast<long long>(audit_trials),
                static_cast<long long>(*RequiredSalts({audit_alpha, audit_beta})),
                audit_beta, slack, pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
  }
  if (estimate->parsed()) {
    ExperimentConfig c = BaseConfig(
        est_krappor ? Algorithm::kKRappor : Algorithm::kMechanism, estimate_flags);
    c.alpha = est_alpha;
    c.beta = est_beta;
    c.epsilon = est_eps;
    c.delta = est_delta;
    c.n = est_n;
    c.c_lower = est_c_lower;
    if (est_n == 0 && est_c_lower == 0.0) {
      std::cerr << "error: estimate needs --n or --c-lower\n";
      return 1;
    }
    return Report(RunConfigs({c}, estimate_flags.out));
  }
  if (seqtest->parsed()) {
    ExperimentConfig c = BaseConfig(Algorithm::kSeqTest, seq_flags);
    c.c0 = seq_c0;
    c.delta = seq_delta;
    c.budget = seq_budget;
    c.centering = centering(seq_centering);
    return Report(RunConfigs({c}, seq_flags.out));
  }
  if (psq->parsed()) {
    ExperimentConfig c = BaseConfig(Algorithm::kPsq, psq_flags);
    c.c0 = psq_c0;
    c.delta = psq_delta;
    c.alpha = psq_alpha;
    c.beta = psq_beta;
    c.budget = psq_budget;
    c.centering = centering(psq_centering);
    return Report(RunConfigs({c}, psq_flags.out));
  }
  if (doubling->parsed()) {
    ExperimentConfig c = BaseConfig(Algorithm::kDoubling, dbl_flags);
    c.c0 = dbl_c0;
    c.delta = dbl_delta;
    c.alpha = dbl_alpha;
    c.beta = dbl_beta;
    c.n0 = dbl_n0;
    c.max_rounds = dbl_rounds;
    c.c_lower = dbl_c_lower;
    return Report(RunConfigs({c}, dbl_flags.out));
  }
  if (batch->parsed()) {
    ExperimentConfig c = BaseConfig(batch_estimator == "plugin"
                                        ? Algorithm::kBatchPlugIn
                                        : Algorithm::kBatchUStatistic,
                                    batch_flags);
    c.c0 = batch_c0;
    c.epsilon = batch_eps;
    c.delta = batch_delta;
    c.f32_bound = batch_f32;
    c.variance_bound = batch_variance;
    return Report(RunConfigs({c}, batch_flags.out));
  }
  if (experiment->parsed()) {
    if (exp_recipe.empty() && exp_config.empty()) {
      std::cerr << "error: experiment needs --recipe or --config\n";
      return 1;
    }
    return Report(RunExperimentCommand(exp_recipe, exp_config, exp_scale,
                                       exp_out, exp_plot));
  }
  return 1;
}

}  // namespace
}  // namespace collider

int main(int argc, char** argv) { return collider::Main(argc, argv); }
