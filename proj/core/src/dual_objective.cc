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

#include "drodp/dual_objective.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace drodp {
namespace {

void CheckPositive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("smoothness constants: ") + what +
                                " must be positive and finite");
  }
}

void CheckIterate(const DualPoint& p) {
  if (!p.x.allFinite() || !std::isfinite(p.eta)) {
    throw std::invalid_argument("dual objective: non-finite iterate");
  }
}

void CheckBatch(std::span<const int> batch) {
  if (batch.empty()) {
    throw std::invalid_argument("dual objective: empty batch");
  }
}

std::vector<int> AllIndices(int n) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

SmoothnessConstants ComputeSmoothnessConstants(double g, double l, double m,
                                               double lambda, double sigma_var,
                                               double s0) {
  CheckPositive(g, "G");
  CheckPositive(l, "L");
  CheckPositive(m, "M");
  CheckPositive(lambda, "lambda");
  CheckPositive(sigma_var, "sigma_var");
  CheckPositive(s0, "S0");
  SmoothnessConstants c;
  c.l0 = g + g * g * m / lambda;
  c.l1 = l / g;
  c.l2 = g * g * m / lambda;
  c.d0 = 8.0 * g * g +
         10.0 * g * g * m * m * sigma_var * sigma_var / (lambda * lambda);
  c.d1 = 8.0;
  c.d2 = g * g * m * m * sigma_var * sigma_var / (lambda * lambda);
  c.h0 = 2.0 * s0 * s0 * s0 * std::sqrt(m) + 2.0 * m * s0 * s0 * s0 * s0 + 1.0;
  c.sigma_var = sigma_var;
  return c;
}

DualProblem::DualProblem(const Dataset* data, const LossOracle* oracle,
                         Divergence divergence, double lambda_pen)
    : data_(data),
      oracle_(oracle),
      divergence_(std::move(divergence)),
      lambda_pen_(lambda_pen),
      eta_scale_g_(oracle->lipschitz_g()) {
  if (data_ == nullptr || oracle_ == nullptr) {
    throw std::invalid_argument("DualProblem: null dataset or oracle");
  }
  if (!(lambda_pen_ > 0)) {
    throw std::invalid_argument("DualProblem: lambda must be positive");
  }
}

double DualProblem::ConjugateArg(double loss, double eta,
                                 ClampStats* clamps) const {
  double a = (loss - eta_scale_g_ * eta) / lambda_pen_;
  if (a > kArgClamp || a < -kArgClamp) {
    if (clamps != nullptr) ++clamps->events;
    a = a > kArgClamp ? kArgClamp : -kArgClamp;
  }
  return a;
}

double DualProblem::SampleLoss(const DualPoint& p, const Sample& s,
                               ClampStats* clamps) const {
  CheckIterate(p);
  const double a = ConjugateArg(oracle_->Loss(p.x, s), p.eta, clamps);
  return lambda_pen_ * divergence_.PsiStar(a) + eta_scale_g_ * p.eta;
}

double DualProblem::PerSampleEtaGrad(const DualPoint& p, const Sample& s,
                                     ClampStats* clamps) const {
  CheckIterate(p);
  const double a = ConjugateArg(oracle_->Loss(p.x, s), p.eta, clamps);
  return eta_scale_g_ * (1.0 - divergence_.PsiStarPrime(a));
}

Eigen::VectorXd DualProblem::PerSampleXGrad(const DualPoint& p,
                                            const Sample& s,
                                            ClampStats* clamps) const {
  CheckIterate(p);
  const double a = ConjugateArg(oracle_->Loss(p.x, s), p.eta, clamps);
  return divergence_.PsiStarPrime(a) * oracle_->LossGrad(p.x, s);
}

double DualProblem::BatchObjective(const DualPoint& p,
                                   std::span<const int> batch,
                                   ClampStats* clamps) const {
  CheckBatch(batch);
  double sum = 0;
  for (int i : batch) sum += SampleLoss(p, data_->sample(i), clamps);
  return sum / static_cast<double>(batch.size());
}

double DualProblem::BatchEtaGrad(const DualPoint& p, std::span<const int> batch,
                                 ClampStats* clamps) const {
  CheckBatch(batch);
  double sum = 0;
  for (int i : batch) sum += PerSampleEtaGrad(p, data_->sample(i), clamps);
  return sum / static_cast<double>(batch.size());
}

Eigen::VectorXd DualProblem::BatchXGrad(const DualPoint& p,
                                        std::span<const int> batch,
                                        ClampStats* clamps) const {
  CheckBatch(batch);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(oracle_->dim());
  for (int i : batch) sum += PerSampleXGrad(p, data_->sample(i), clamps);
  return sum / static_cast<double>(batch.size());
}

double DualProblem::FullObjective(const DualPoint& p, ClampStats* clamps) const {
  const std::vector<int> idx = AllIndices(data_->size());
  return BatchObjective(p, idx, clamps);
}

double DualProblem::FullEtaGrad(const DualPoint& p, ClampStats* clamps) const {
  const std::vector<int> idx = AllIndices(data_->size());
  return BatchEtaGrad(p, idx, clamps);
}

Eigen::VectorXd DualProblem::FullXGrad(const DualPoint& p,
                                       ClampStats* clamps) const {
  const std::vector<int> idx = AllIndices(data_->size());
  return BatchXGrad(p, idx, clamps);
}

double DualProblem::MinimizeEta(const Eigen::VectorXd& x) const {
  const double s0 = divergence_.domain_bound_s0();
  double lo = -10.0 * s0;
  double hi = 10.0 * s0;
  DualPoint p{x, lo};
  // FullEtaGrad is non-decreasing in eta (psi* is convex); bisect to a root.
  double g_lo = FullEtaGrad(p);
  p.eta = hi;
  double g_hi = FullEtaGrad(p);
  if (g_lo > 0 || g_hi < 0) {
    throw std::runtime_error(
        "DualProblem::MinimizeEta: no sign change in [-10 S0, 10 S0]");
  }
  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 200;
  for (int it = 0; it < kMaxIter && hi - lo > kTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    p.eta = mid;
    const double g_mid = FullEtaGrad(p);
    if (g_mid < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double DualProblem::TrueGradientNorm(const Eigen::VectorXd& x) const {
  const double eta_star = MinimizeEta(x);
  return FullXGrad(DualPoint{x, eta_star}).norm();
}

double EstimateSigmaVar(const Dataset& data, const LossOracle& oracle) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(oracle.dim());
  const int n = data.size();
  double mean = 0;
  for (int i = 0; i < n; ++i) mean += oracle.Loss(zero, data.sample(i));
  mean /= n;
  double var = 0;
  for (int i = 0; i < n; ++i) {
    const double d = oracle.Loss(zero, data.sample(i)) - mean;
    var += d * d;
  }
  var /= n;
  // Keep the value usable as a positive constant even for degenerate data.
  return std::max(std::sqrt(var), 1e-12);
}

}  // namespace drodp
