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

#include "drodp/mechanisms.h"

#include <cmath>
#include <stdexcept>

namespace drodp {
namespace {

void CheckThresholds(const ClipThresholds& c) {
  if (!(c.c1 > 0) || !(c.c2 > 0) || !(c.c3 > 0) || !(c.c4 > 0) || !(c.c5 > 0)) {
    throw std::invalid_argument("clip thresholds must be positive");
  }
}

void CheckPlanArgs(long t, long q, long n, long b_small_1, long b_small_2,
                   double c) {
  if (t < 1 || q < 1) throw std::invalid_argument("noise plan: T, q must be >= 1");
  if (t % q != 0) throw std::invalid_argument("noise plan: q must divide T");
  if (b_small_1 < 1 || b_small_1 > n || b_small_2 < 1 || b_small_2 > n) {
    throw std::invalid_argument("noise plan: batch sizes must be in [1, n]");
  }
  if (!(c > 0)) throw std::invalid_argument("noise plan: c must be positive");
}

}  // namespace

void ValidateBudget(const PrivacyBudget& budget) {
  if (!(budget.epsilon > 0)) {
    throw std::invalid_argument("privacy budget: epsilon must be positive");
  }
  if (!(budget.delta > 0) || !(budget.delta < 1)) {
    throw std::invalid_argument("privacy budget: delta must be in (0, 1)");
  }
}

Eigen::VectorXd Clip(const Eigen::VectorXd& v, double c) {
  if (!(c > 0)) throw std::invalid_argument("Clip: threshold must be positive");
  const double norm = v.norm();
  if (norm <= c) return v;
  return (c / norm) * v;
}

double ClipScalar(double v, double c) {
  if (!(c > 0)) throw std::invalid_argument("Clip: threshold must be positive");
  const double a = std::abs(v);
  if (a <= c) return v;
  return (c / a) * v;
}

double CalibrateSigma(double sensitivity, long uses_t, long n, long batch_b,
                      const PrivacyBudget& budget, double c) {
  ValidateBudget(budget);
  if (!(sensitivity >= 0)) {
    throw std::invalid_argument("CalibrateSigma: sensitivity must be >= 0");
  }
  if (uses_t < 1 || n < 1) {
    throw std::invalid_argument("CalibrateSigma: T and n must be >= 1");
  }
  if (batch_b < 1 || batch_b > n) {
    throw std::invalid_argument("CalibrateSigma: batch must be in [1, n]");
  }
  if (budget.non_private()) return 0.0;
  const double log_term = std::sqrt(std::log(1.0 / budget.delta));
  const double rate = std::max(1.0 / batch_b,
                               std::sqrt(static_cast<double>(uses_t)) / n);
  return c * sensitivity * log_term / budget.epsilon * rate;
}

NoisePlan NoisePlanDoubleSpider(const SmoothnessConstants& constants,
                                const ClipThresholds& thresholds, long t,
                                long q, long n, long n2, long n4,
                                const PrivacyBudget& budget, double c) {
  ValidateBudget(budget);
  CheckThresholds(thresholds);
  CheckPlanArgs(t, q, n, n2, n4, c);
  if (!(constants.l0 > 0) || !(constants.l2 > 0)) {
    throw std::invalid_argument("noise plan: invalid smoothness constants");
  }
  NoisePlan plan;
  plan.mech_constant_c = c;
  if (budget.non_private()) return plan;
  const double log_term = std::sqrt(std::log(1.0 / budget.delta));
  const double eps = budget.epsilon;
  const double sqrt_t = std::sqrt(static_cast<double>(t));
  const double sqrt_q = std::sqrt(static_cast<double>(q));
  const double refresh = c * sqrt_t * log_term / (n * sqrt_q * eps);
  plan.sigma1 = thresholds.c1 * refresh;
  plan.sigma3 = thresholds.c3 * refresh;
  plan.sigma2_unit = c * log_term / (n2 * eps);
  plan.sigma2 = thresholds.c2 * plan.sigma2_unit;
  plan.sigma4_unit =
      c * log_term / eps * std::max(1.0 / n4, sqrt_t / (n * sqrt_q));
  plan.sigma4 = thresholds.c4 * plan.sigma4_unit;
  return plan;
}

NoisePlan NoisePlanRecursive(const ClipThresholds& thresholds, long t, long q,
                             long n, long b2, long b4,
                             const PrivacyBudget& budget, double c) {
  ValidateBudget(budget);
  CheckThresholds(thresholds);
  CheckPlanArgs(t, q, n, b2, b4, c);
  NoisePlan plan;
  plan.mech_constant_c = c;
  if (budget.non_private()) return plan;
  const double log_term = std::sqrt(std::log(1.0 / budget.delta));
  const double eps = budget.epsilon;
  const double sqrt_t = std::sqrt(static_cast<double>(t));
  const double refresh = c * sqrt_t * log_term / (n * q * eps);
  plan.sigma1 = thresholds.c1 * refresh;
  plan.sigma3 = thresholds.c3 * refresh;
  plan.sigma2_unit = c * log_term / eps * std::max(1.0 / b2, sqrt_t / n);
  plan.sigma4_unit = c * log_term / eps * std::max(1.0 / b4, sqrt_t / n);
  plan.sigma2 = thresholds.c2 * plan.sigma2_unit;
  plan.sigma4 = thresholds.c4 * plan.sigma4_unit;
  plan.sigma_s = thresholds.c5 * c * sqrt_t * log_term / (n * eps);
  return plan;
}

Eigen::VectorXd GaussianNoise(Rng& rng, double sigma, int dim) {
  if (dim < 1) throw std::invalid_argument("GaussianNoise: dim must be >= 1");
  if (sigma < 0) throw std::invalid_argument("GaussianNoise: sigma must be >= 0");
  if (sigma == 0) return Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd out(dim);
  for (int i = 0; i < dim; ++i) out[i] = sigma * rng.NextGaussian();
  return out;
}

double EmpiricalSensitivity(
    const std::function<Eigen::VectorXd(const Dataset&)>& op,
    const Dataset& data, const std::function<Sample(Rng&)>& replacement,
    int trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("EmpiricalSensitivity: trials >= 1");
  const Eigen::VectorXd base = op(data);
  double worst = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const int index = static_cast<int>(rng.NextInt(data.size()));
    const Dataset neighbor = data.ReplaceOne(index, replacement(rng));
    worst = std::max(worst, (op(neighbor) - base).norm());
  }
  return worst;
}

}  // namespace drodp
