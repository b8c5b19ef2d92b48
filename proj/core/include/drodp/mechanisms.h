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

#ifndef DRODP_MECHANISMS_H_
#define DRODP_MECHANISMS_H_

#include <functional>

#include <Eigen/Core>

#include "drodp/dataset.h"
#include "drodp/dual_objective.h"
#include "drodp/rng.h"

namespace drodp {

struct PrivacyBudget {
  double epsilon = std::numeric_limits<double>::infinity();
  double delta = 1e-5;

  // epsilon = inf selects the non-private diagnostic mode (all sigma = 0).
  bool non_private() const { return std::isinf(epsilon); }
};

void ValidateBudget(const PrivacyBudget& budget);

struct ClipThresholds {
  double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0, c5 = 1.0;
};

// Gaussian standard deviations per estimator.  For the recursive plan,
// sigma2/sigma4 hold the threshold-scaled (hatted) values and
// sigma2_unit/sigma4_unit the per-unit-movement factors; the optimizer takes
// min(movement * unit, hatted) at run time, with a 1e-12 * C floor when the
// released trajectory has not moved.
struct NoisePlan {
  double sigma1 = 0, sigma2 = 0, sigma3 = 0, sigma4 = 0, sigma_s = 0;
  double mech_constant_c = 1.0;
  double sigma2_unit = 0, sigma4_unit = 0;
};

// min{C/||v||, 1} * v.
Eigen::VectorXd Clip(const Eigen::VectorXd& v, double c);
double ClipScalar(double v, double c);

// Subsampled Gaussian-mechanism scale
//   sigma = c * sensitivity * sqrt(log(1/delta)) / epsilon
//                            * max{1/batch_b, sqrt(uses_t)/n}.
double CalibrateSigma(double sensitivity, long uses_t, long n, long batch_b,
                      const PrivacyBudget& budget, double c);

// Double-SPIDER calibration:
//   sigma1 = c C1 sqrt(T log(1/delta)) / (n sqrt(q) eps)
//   sigma2 = c C2 sqrt(log(1/delta)) / (N2 eps)
//   sigma3 = c C3 sqrt(T log(1/delta)) / (n sqrt(q) eps)
//   sigma4 = c C4 sqrt(log(1/delta)) / eps * max{1/N4, sqrt(T)/(n sqrt(q))}
// sigma2_unit/sigma4_unit carry the same factors without the threshold, for
// the optional movement-scaled thresholds. The smoothness constants are
// validated here because the movement coefficients derive from them.
NoisePlan NoisePlanDoubleSpider(const SmoothnessConstants& constants,
                                const ClipThresholds& thresholds, long t,
                                long q, long n, long n2, long n4,
                                const PrivacyBudget& budget, double c);

// Recursive-SPIDER calibration:
//   sigma1 = c C1 sqrt(T log(1/delta)) / (n q eps)     (sigma3 likewise, C3)
//   sigma2 (hatted) = c C2 sqrt(log(1/delta))/eps * max{1/b2, sqrt(T)/n}
//   sigma4 (hatted) = c C4 sqrt(log(1/delta))/eps * max{1/b4, sqrt(T)/n}
//   sigma_s = c C5 sqrt(T log(1/delta)) / (n eps)
NoisePlan NoisePlanRecursive(const ClipThresholds& thresholds, long t, long q,
                             long n, long b2, long b4,
                             const PrivacyBudget& budget, double c);

// i.i.d. N(0, sigma^2) entries; sigma = 0 returns the zero vector without
// consuming draws.
Eigen::VectorXd GaussianNoise(Rng& rng, double sigma, int dim);

// Max replace-one deviation of a batch statistic over `trials` trials; the
// replaced index is uniform and the replacement comes from `replacement`.
// Test oracle for the privacy preconditions.
double EmpiricalSensitivity(
    const std::function<Eigen::VectorXd(const Dataset&)>& op,
    const Dataset& data, const std::function<Sample(Rng&)>& replacement,
    int trials, Rng& rng);

}  // namespace drodp

#endif  // DRODP_MECHANISMS_H_
