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

#ifndef DRODP_EXPERIMENT_H_
#define DRODP_EXPERIMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "drodp/dataset.h"
#include "drodp/divergence.h"
#include "drodp/loss.h"
#include "drodp/optimizers.h"

namespace drodp {

struct GenerateSpec {
  int n = 0;
  int d = 0;
  double imratio = 0.1;
  uint64_t seed = 0;
};

struct SweepSpec {
  std::vector<std::string> optimizers;  // empty -> base optimizer only
  std::vector<double> epsilons;         // empty -> base epsilon only
  std::vector<long> ns;                 // empty -> base dataset size only
};

// One JSON document holds every knob; flags may override the scalar ones.
struct ExperimentConfig {
  std::string name = "run";
  std::string dataset_path;               // exclusive with generate
  std::optional<GenerateSpec> generate;
  LossKind oracle = LossKind::kLogistic;
  std::string divergence = "chi2";
  double lambda = 1.0;       // dual penalty
  double rho = 0.0;          // compositional radius
  double lambda_min = 1e-3;  // compositional constraint
  double s0 = 5.0;
  std::string optimizer = "double-spider";
  PrivacyBudget budget;
  double mech_c = 1.0;
  std::vector<uint64_t> seeds{1};
  long eval_every = 10;
  std::string out_dir = ".";
  DoubleSpiderConfig double_spider;
  RecursiveSpiderConfig recursive_spider;
  SgdaConfig sgda;
  ClipMode clip_mode = ClipMode::kAsWritten;
  bool exact_lambda_grad = false;
  bool timing = false;
  bool emit_gnuplot = false;
  int threads = 1;
  std::optional<SweepSpec> sweep;

  static ExperimentConfig FromJsonFile(const std::string& path);
  static ExperimentConfig FromJsonText(const std::string& text);
};

struct SummaryRow {
  std::string optimizer;
  double epsilon = 0;
  long n = 0;
  uint64_t seed = 0;
  double final_true_grad_norm = 0;
  double best_true_grad_norm = 0;
  double final_objective = 0;
  long long clamp_count = 0;
  double runtime_ms = 0;
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;       // sorted by (optimizer, eps, n, seed)
  std::vector<std::string> trace_files;
  bool any_aborted = false;
};

// Trace CSV: header t,est_norm_x,est_norm_eta,true_grad_norm,objective,
// clamps,wall_ms; true_grad_norm cells empty at non-eval steps; 17
// significant digits throughout.
std::string TraceToCsv(const RunTrace& trace);

// Runs every (optimizer, epsilon, n, seed) combination of the config (its
// sweep section if present, otherwise the single base combination), writes
// one trace CSV and one iterate JSON per run plus summary.csv and
// aggregate.csv, all atomically.
ExperimentResult RunExperiment(const ExperimentConfig& config);

// Recomputes the exact gradient norm for a saved iterate JSON against the
// config's problem definition.
double EvaluateIterateFile(const ExperimentConfig& config,
                           const std::string& iterate_path);

}  // namespace drodp

#endif  // DRODP_EXPERIMENT_H_
