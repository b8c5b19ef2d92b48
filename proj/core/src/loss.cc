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

#include "drodp/loss.h"

#include <cmath>
#include <stdexcept>

namespace drodp {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow.
double LogisticLoss(double m) {
  if (m >= 0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

}  // namespace

LossKind ParseLossKind(const std::string& name) {
  if (name == "logistic") return LossKind::kLogistic;
  if (name == "smoothed-hinge") return LossKind::kSmoothedHinge;
  if (name == "nonconvex-sigmoid") return LossKind::kNonconvexSigmoid;
  throw std::invalid_argument("unknown loss kind: " + name);
}

std::string LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kLogistic:
      return "logistic";
    case LossKind::kSmoothedHinge:
      return "smoothed-hinge";
    case LossKind::kNonconvexSigmoid:
      return "nonconvex-sigmoid";
  }
  return "?";
}

LossOracle::LossOracle(LossKind kind, int dim, double feature_norm_bound)
    : kind_(kind), dim_(dim), feature_norm_bound_(feature_norm_bound) {
  if (dim < 1) throw std::invalid_argument("LossOracle: dim must be >= 1");
  if (!(feature_norm_bound > 0)) {
    throw std::invalid_argument("LossOracle: feature norm bound must be positive");
  }
  const double r = feature_norm_bound;
  switch (kind_) {
    case LossKind::kLogistic:
      lipschitz_g_ = r;
      smooth_l_ = r * r / 4.0;
      break;
    case LossKind::kSmoothedHinge:
      lipschitz_g_ = r;
      smooth_l_ = r * r;
      break;
    case LossKind::kNonconvexSigmoid:
      lipschitz_g_ = r / 4.0;
      smooth_l_ = r * r / (6.0 * std::sqrt(3.0));
      break;
  }
}

LossOracle LossOracle::For(LossKind kind, const Dataset& data) {
  return LossOracle(kind, data.feature_dim(), data.max_feature_norm());
}

double LossOracle::Loss(const Eigen::VectorXd& x, const Sample& s) const {
  if (x.size() != dim_ || s.features.size() != dim_) {
    throw std::invalid_argument("LossOracle::Loss: dimension mismatch");
  }
  const double m = s.label * x.dot(s.features);
  switch (kind_) {
    case LossKind::kLogistic:
      return LogisticLoss(m);
    case LossKind::kSmoothedHinge:
      if (m >= 1.0) return 0.0;
      if (m <= 0.0) return 0.5 - m;
      return 0.5 * (1.0 - m) * (1.0 - m);
    case LossKind::kNonconvexSigmoid:
      return Sigmoid(-m);
  }
  return 0.0;
}

double LossOracle::MarginDerivative(double m) const {
  switch (kind_) {
    case LossKind::kLogistic:
      return -Sigmoid(-m);
    case LossKind::kSmoothedHinge:
      if (m >= 1.0) return 0.0;
      if (m <= 0.0) return -1.0;
      return -(1.0 - m);
    case LossKind::kNonconvexSigmoid: {
      const double s = Sigmoid(-m);
      return -s * (1.0 - s);
    }
  }
  return 0.0;
}

Eigen::VectorXd LossOracle::LossGrad(const Eigen::VectorXd& x,
                                     const Sample& s) const {
  if (x.size() != dim_ || s.features.size() != dim_) {
    throw std::invalid_argument("LossOracle::LossGrad: dimension mismatch");
  }
  const double m = s.label * x.dot(s.features);
  return MarginDerivative(m) * s.label * s.features;
}

}  // namespace drodp
