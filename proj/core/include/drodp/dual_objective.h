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

#ifndef DRODP_DUAL_OBJECTIVE_H_
#define DRODP_DUAL_OBJECTIVE_H_

#include <span>

#include <Eigen/Core>

#include "drodp/dataset.h"
#include "drodp/divergence.h"
#include "drodp/loss.h"

namespace drodp {

struct DualPoint {
  Eigen::VectorXd x;
  double eta = 0.0;
};

// Constants of the partially generalized smoothness / affine variance noise
// lemmas and the dual-gradient bound:
//   L0 = G + G^2 M / lambda        L1 = L / G        L2 = G^2 M / lambda
//   D0 = 8 G^2 + 10 G^2 M^2 sigma^2 / lambda^2       D1 = 8
//   D2 = G^2 M^2 sigma^2 / lambda^2
//   H0 = 2 S0^3 sqrt(M) + 2 M S0^4 + 1
struct SmoothnessConstants {
  double l0 = 0, l1 = 0, l2 = 0;
  double d0 = 0, d1 = 0, d2 = 0;
  double h0 = 0;
  double sigma_var = 0;
};

SmoothnessConstants ComputeSmoothnessConstants(double g, double l, double m,
                                               double lambda, double sigma_var,
                                               double s0);

// Running counter of conjugate-argument clamp events (overflow guard on
// psi* arguments).
struct ClampStats {
  long long events = 0;
};

// The penalized dual objective
//   L(x, eta; xi) = lambda * psi*((loss(x;xi) - G*eta) / lambda) + G*eta,
// i.e. the strong-duality reformulation with the dual variable pre-scaled by
// G (gradients carry the chain-rule factor G).  Conjugate arguments are
// clamped to [-20, 20] before evaluation; clamp events are counted.
class DualProblem {
 public:
  DualProblem(const Dataset* data, const LossOracle* oracle,
              Divergence divergence, double lambda_pen);

  double SampleLoss(const DualPoint& p, const Sample& s,
                    ClampStats* clamps = nullptr) const;

  // G * (1 - (psi*)'(a(xi))) for one sample.
  double PerSampleEtaGrad(const DualPoint& p, const Sample& s,
                          ClampStats* clamps = nullptr) const;

  // (psi*)'(a(xi)) * grad loss(x; xi) for one sample.
  Eigen::VectorXd PerSampleXGrad(const DualPoint& p, const Sample& s,
                                 ClampStats* clamps = nullptr) const;

  // Means over a batch of dataset indices, accumulated in index order.
  double BatchObjective(const DualPoint& p, std::span<const int> batch,
                        ClampStats* clamps = nullptr) const;
  double BatchEtaGrad(const DualPoint& p, std::span<const int> batch,
                      ClampStats* clamps = nullptr) const;
  Eigen::VectorXd BatchXGrad(const DualPoint& p, std::span<const int> batch,
                             ClampStats* clamps = nullptr) const;

  double FullObjective(const DualPoint& p, ClampStats* clamps = nullptr) const;
  double FullEtaGrad(const DualPoint& p, ClampStats* clamps = nullptr) const;
  Eigen::VectorXd FullXGrad(const DualPoint& p,
                            ClampStats* clamps = nullptr) const;

  // argmin_eta L(x, eta) over the full dataset: bisection on the monotone
  // map eta -> FullEtaGrad to interval width 1e-10 (at most 200 steps),
  // bracket [-10 S0, 10 S0]. Throws std::runtime_error if no bracket.
  double MinimizeEta(const Eigen::VectorXd& x) const;

  // || grad_x L(x, eta*(x)) || over the full dataset. Evaluation-only,
  // non-private.
  double TrueGradientNorm(const Eigen::VectorXd& x) const;

  const Dataset& data() const { return *data_; }
  const LossOracle& oracle() const { return *oracle_; }
  const Divergence& divergence() const { return divergence_; }
  double lambda_pen() const { return lambda_pen_; }
  double eta_scale_g() const { return eta_scale_g_; }

  static constexpr double kArgClamp = 20.0;

 private:
  double ConjugateArg(double loss, double eta, ClampStats* clamps) const;

  const Dataset* data_;
  const LossOracle* oracle_;
  Divergence divergence_;
  double lambda_pen_;
  double eta_scale_g_;
};

// Empirical standard deviation of per-sample losses at x = 0; the default
// sigma_var plugged into the variance-noise constants.
double EstimateSigmaVar(const Dataset& data, const LossOracle& oracle);

}  // namespace drodp

#endif  // DRODP_DUAL_OBJECTIVE_H_
