//
// Copyright 2026 The drodp Authors
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
//

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "drodp/dataset.h"
#include "drodp/experiment.h"
#include "drodp/textio.h"

namespace {

using drodp::ExperimentConfig;

double ParseEpsilonFlag(const std::string& s) {
  if (s == "inf" || s == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  return drodp::ParseDouble(s);
}

struct Overrides {
  std::string config_path;
  std::optional<std::string> epsilon;
  std::optional<double> delta;
  std::optional<std::string> optimizer;
  std::optional<std::string> divergence;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> mech_c;
  std::optional<std::string> clip_mode;
  bool exact_lambda_grad = false;
  bool emit_gnuplot = false;
  bool timing = false;
  std::optional<int> threads;
};

void AddOverrideFlags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "experiment config JSON")
      ->required();
  cmd->add_option("--epsilon", ov.epsilon, "privacy budget epsilon ('inf' for the non-private diagnostic mode)");
  cmd->add_option("--delta", ov.delta, "privacy budget delta");
  cmd->add_option("--optimizer", ov.optimizer,
                  "double-spider | recursive-spider | dp-sgda");
  cmd->add_option("--divergence", ov.divergence,
                  "chi2 | kl | klcvar:<alpha> | cressie:<k>");
  cmd->add_option("--seed", ov.seed, "single seed (replaces the config's list)");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--mech-c", ov.mech_c, "Gaussian-mechanism universal constant");
  cmd->add_option("--clip-mode", ov.clip_mode,
                  "as-written | batch-mean | per-sample");
  cmd->add_flag("--exact-lambda-grad", ov.exact_lambda_grad,
                "analytic lambda gradient in the recursive loop (diagnostic)");
  cmd->add_flag("--emit-gnuplot", ov.emit_gnuplot, "write a gnuplot script");
  cmd->add_flag("--timing", ov.timing,
                "record wall times (breaks byte-identical reruns)");
  cmd->add_option("--threads", ov.threads, "sweep worker threads");
}

ExperimentConfig LoadWithOverrides(const Overrides& ov) {
  ExperimentConfig cfg = ExperimentConfig::FromJsonFile(ov.config_path);
  if (ov.epsilon) cfg.budget.epsilon = ParseEpsilonFlag(*ov.epsilon);
  if (ov.delta) cfg.budget.delta = *ov.delta;
  if (ov.optimizer) cfg.optimizer = *ov.optimizer;
  if (ov.divergence) cfg.divergence = *ov.divergence;
  if (ov.seed) cfg.seeds = {*ov.seed};
  if (ov.out) cfg.out_dir = *ov.out;
  if (ov.mech_c) cfg.mech_c = *ov.mech_c;
  if (ov.clip_mode) cfg.clip_mode = drodp::ParseClipMode(*ov.clip_mode);
  if (ov.exact_lambda_grad) cfg.exact_lambda_grad = true;
  if (ov.emit_gnuplot) cfg.emit_gnuplot = true;
  if (ov.timing) cfg.timing = true;
  if (ov.threads) cfg.threads = *ov.threads;
  return cfg;
}

int RunAndReport(const ExperimentConfig& cfg) {
  const drodp::ExperimentResult result = drodp::RunExperiment(cfg);
  for (const drodp::SummaryRow& row : result.rows) {
    std::printf("%s eps=%s n=%ld seed=%llu final_true_grad_norm=%s\n",
                row.optimizer.c_str(), drodp::FormatDouble(row.epsilon).c_str(),
                row.n, static_cast<unsigned long long>(row.seed),
                drodp::FormatDouble(row.final_true_grad_norm).c_str());
  }
  if (result.any_aborted) {
    std::fprintf(stderr, "{\"error\":\"one or more runs aborted on a divergent iterate\"}\n");
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private distributionally robust optimization harness"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "write a synthetic imbalanced dataset CSV");
  int gen_n = 200, gen_d = 5;
  double gen_imratio = 0.1;
  uint64_t gen_seed = 1;
  std::string gen_out = "data.csv";
  gen->add_option("--n", gen_n, "number of samples")->required();
  gen->add_option("--d", gen_d, "feature dimension")->required();
  gen->add_option("--imratio", gen_imratio, "positive-class fraction in (0, 0.5]");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output CSV path");

  // run
  auto* run = app.add_subcommand("run", "run one experiment (config's base combination)");
  Overrides run_ov;
  AddOverrideFlags(run, run_ov);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run the config's cartesian sweep grid");
  Overrides sweep_ov;
  AddOverrideFlags(sweep, sweep_ov);

  // eval
  auto* eval = app.add_subcommand("eval", "recompute the exact gradient norm of a saved iterate");
  Overrides eval_ov;
  std::string iterate_path;
  AddOverrideFlags(eval, eval_ov);
  eval->add_option("--iterate", iterate_path, "iterate JSON written by run/sweep")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      drodp::MakeImbalancedDataset(gen_n, gen_d, gen_imratio, gen_seed)
          .WriteCsv(gen_out);
      std::printf("wrote %s\n", gen_out.c_str());
      return 0;
    }
    if (run->parsed()) {
      ExperimentConfig cfg = LoadWithOverrides(run_ov);
      cfg.sweep.reset();  // single combination
      return RunAndReport(cfg);
    }
    if (sweep->parsed()) {
      return RunAndReport(LoadWithOverrides(sweep_ov));
    }
    if (eval->parsed()) {
      const ExperimentConfig cfg = LoadWithOverrides(eval_ov);
      const double norm = drodp::EvaluateIterateFile(cfg, iterate_path);
      std::printf("%s\n", drodp::FormatDouble(norm).c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":\"%s\"}\n", e.what());
    return 1;
  }
  return 0;
}
