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

#ifndef DRODP_OPTIMIZERS_H_
#define DRODP_OPTIMIZERS_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "drodp/compositional.h"
#include "drodp/dual_objective.h"
#include "drodp/mechanisms.h"
#include "drodp/rng.h"

namespace drodp {

// Where the clipping operator sits in each estimator.  As written in the
// pseudocode, the double-SPIDER loop clips the minibatch mean (difference)
// while the recursive loop clips per sample before averaging; the other two
// modes force one convention on both loops for ablations.
enum class ClipMode { kAsWritten, kBatchMean, kPerSample };

ClipMode ParseClipMode(const std::string& name);
std::string ClipModeName(ClipMode mode);

struct TraceRow {
  long t = 0;
  double est_norm_x = 0;    // ||v_t||
  double est_norm_eta = 0;  // |g_t| (dual), |u_t| (compositional)
  std::optional<double> true_grad_norm;
  double objective = 0;
  long long clamps = 0;  // cumulative clamp events on the estimator path
  double wall_ms = 0;    // cumulative; stays 0 unless timing is enabled
};

struct RunTrace {
  std::vector<TraceRow> rows;  // one per iteration (T unless aborted)
  Eigen::VectorXd final_x;
  double final_scalar = 0;  // eta (dual) or lambda (compositional)
  Eigen::VectorXd output_x;  // iterate at the uniformly random index tau
  double output_scalar = 0;
  long output_index = 0;  // tau, uniform on {1, ..., T}
  double final_true_grad_norm = 0;
  double best_true_grad_norm = 0;
  double final_objective = 0;
  long long clamp_count = 0;
  double runtime_ms = 0;
  bool aborted = false;
  std::string abort_reason;
};

struct DoubleSpiderConfig {
  long t = 1000;
  long q = 20;  // must divide t
  long n1 = 0, n2 = 0, n3 = 0, n4 = 0;  // 0 -> full batch (n1/n3), q (n2/n4)
  double alpha = 0;  // eta step; 0 -> 1/(4 L2)
  double beta = 0;   // x step; 0 -> min{1/(2L0 + L1 sqrt(H0)), 1/(L0 sqrt(n) ||v||)}
  ClipThresholds thresholds;
  PrivacyBudget budget;
  uint64_t seed = 1;
  long eval_every = 10;  // 0 disables periodic true-gradient evaluations
  SmoothnessConstants constants;
  ClipMode clip_mode = ClipMode::kAsWritten;
  // Increment thresholds rescaled by the released iterate movement:
  //   C2_t = 2 max{L2 |d_eta|, (L2/G) ||d_x||}
  //   C4_t = 2 max{(L1 L2 / G) |d_eta|, (L0 + L1 sqrt(H0)) ||d_x||}
  // floored at 1e-12 * C; the noise scales along via the plan's unit factors.
  bool movement_thresholds = false;
  bool timing = false;
};

struct RecursiveSpiderConfig {
  long t = 1000;
  long q = 20;
  long b1 = 0, b2 = 0, b3 = 0, b4 = 0;  // 0 -> full batch (b1/b3), q (b2/b4)
  double eta_step = 0.05;  // fixed step if > 0 and not adaptive
  bool eta_adaptive = false;  // eta_t = k / (m + t sigma^2)^{1/3}
  double eta_k = 1.0, eta_m = 1.0, eta_sigma_sq = 0.0;
  double beta_momentum_c = 1.0;  // beta_t = c * eta_t^2, clamped to (0, 1]
  ClipThresholds thresholds;
  PrivacyBudget budget;
  uint64_t seed = 1;
  long eval_every = 10;
  ClipMode clip_mode = ClipMode::kAsWritten;
  // Replace the lambda component of z_t with the analytic full-data
  // gradient (non-private diagnostic).
  bool exact_lambda_grad = false;
  // Difference the inner value at consecutive iterates on the same fresh
  // sample instead of the as-written recursion.
  bool storm_conventional = false;
  bool timing = false;
};

struct SgdaConfig {
  long t = 1000;
  long batch = 32;
  double alpha = 0.1;  // eta step
  double beta = 0.1;   // x step
  double c_eta = 1.0, c_x = 1.0;
  PrivacyBudget budget;
  uint64_t seed = 1;
  long eval_every = 10;
  double mech_c = 1.0;
  bool timing = false;
};

// Per-iteration views for tests (estimators before the iterate update).
struct DoubleSpiderIterState {
  long t;
  const Eigen::VectorXd& x;
  double eta;
  double eta_next;
  double g;
  const Eigen::VectorXd& v;
};
using DoubleSpiderObserver = std::function<void(const DoubleSpiderIterState&)>;

struct RecursiveSpiderIterState {
  long t;
  const Eigen::VectorXd& x;
  double lambda;
  const Eigen::VectorXd& v;
  double u;
  double s;
  const Eigen::VectorXd& z;
};
using RecursiveSpiderObserver =
    std::function<void(const RecursiveSpiderIterState&)>;

// Alternating refresh/increment variance-reduced loops on the dual objective
// (eta first, then x, per iteration), Gaussian noise per the plan.  Noise,
// batch, single-sample and output-index draws live on disjoint sub-streams
// keyed by (purpose, estimator, iteration), so traces are bit-reproducible
// per seed.
RunTrace DpDoubleSpider(const DualProblem& problem,
                        const DoubleSpiderConfig& config, const NoisePlan& plan,
                        Rng rng, const DoubleSpiderObserver& observer = nullptr);

// Variance-reduced loop on the compositional objective with the recursively
// estimated inner value s_t (single sample per iteration) and z_t assembled
// from (v_t, u_t, s_t); lambda is projected onto [lambda_min, inf) after
// every step.
RunTrace DpRecursiveSpider(const CompProblem& problem,
                           const RecursiveSpiderConfig& config,
                           const NoisePlan& plan, Rng rng,
                           const RecursiveSpiderObserver& observer = nullptr);

// Baseline: simultaneous clipped-noisy SGD on (x, eta); per-sample clipping,
// noise from CalibrateSigma with sensitivity 2C/batch and uses_t = T.
RunTrace DpSgda(const DualProblem& problem, const SgdaConfig& config, Rng rng);

// Draft double-SPIDER configuration from the utility-theorem parameter
// settings: q = floor((n eps / sqrt(d log(1/delta)))^{2/3}), batch sizes per
// the stated lower bounds (floored, min 1, capped at n), T the smallest
// multiple of q covering 6 n c0 psi0. The harness may override any field.
DoubleSpiderConfig SuggestTheoreticalParams(const SmoothnessConstants& constants,
                                            long n, long d,
                                            const PrivacyBudget& budget,
                                            double psi0 = 1.0);

// Batch sizes actually used for a dataset of size n (0 entries resolved to
// their defaults); the noise plans must be built from these.
struct ResolvedBatches {
  long refresh_x = 0, increment_x = 0, refresh_scalar = 0, increment_scalar = 0;
};
ResolvedBatches ResolveDoubleSpiderBatches(const DoubleSpiderConfig& config,
                                           long n);
ResolvedBatches ResolveRecursiveBatches(const RecursiveSpiderConfig& config,
                                        long n);

}  // namespace drodp

#endif  // DRODP_OPTIMIZERS_H_
