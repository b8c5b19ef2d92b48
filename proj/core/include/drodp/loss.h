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

#ifndef DRODP_LOSS_H_
#define DRODP_LOSS_H_

#include <string>

#include <Eigen/Core>

#include "drodp/dataset.h"

namespace drodp {

enum class LossKind {
  kLogistic,          // log(1 + exp(-y<x,f>))
  kSmoothedHinge,     // 0 / 0.5(1-m)^2 / 0.5-m over m >= 1 / [0,1] / m <= 0
  kNonconvexSigmoid,  // 1 / (1 + exp(y<x,f>)); bounded, smooth, non-convex
};

LossKind ParseLossKind(const std::string& name);
std::string LossKindName(LossKind kind);

// Per-sample loss and gradient with closed-form regularity constants.  With
// feature norms bounded by R the stored constants are
//   logistic:          G = R,    L = R^2 / 4
//   smoothed hinge:    G = R,    L = R^2
//   nonconvex sigmoid: G = R/4,  L = R^2 / (6 sqrt 3)
// All three losses are non-negative by construction.
class LossOracle {
 public:
  LossOracle(LossKind kind, int dim, double feature_norm_bound);

  // Constants taken from the dataset's max feature norm.
  static LossOracle For(LossKind kind, const Dataset& data);

  double Loss(const Eigen::VectorXd& x, const Sample& s) const;
  Eigen::VectorXd LossGrad(const Eigen::VectorXd& x, const Sample& s) const;

  LossKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double lipschitz_g() const { return lipschitz_g_; }
  double smooth_l() const { return smooth_l_; }
  double feature_norm_bound() const { return feature_norm_bound_; }

 private:
  double MarginDerivative(double margin) const;  // d loss / d margin

  LossKind kind_;
  int dim_;
  double feature_norm_bound_;
  double lipschitz_g_;
  double smooth_l_;
};

}  // namespace drodp

#endif  // DRODP_LOSS_H_
