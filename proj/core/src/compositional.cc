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

#include "drodp/compositional.h"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace drodp {

CompProblem::CompProblem(const Dataset* data, const LossOracle* oracle,
                         double rho, double lambda_min)
    : data_(data), oracle_(oracle), rho_(rho), lambda_min_(lambda_min) {
  if (data_ == nullptr || oracle_ == nullptr) {
    throw std::invalid_argument("CompProblem: null dataset or oracle");
  }
  if (rho_ < 0) throw std::invalid_argument("CompProblem: rho must be >= 0");
  if (!(lambda_min_ > 0)) {
    throw std::invalid_argument("CompProblem: lambda_min must be positive");
  }
}

void CompProblem::CheckPoint(const CompositionalPoint& w) const {
  if (!w.x.allFinite() || !std::isfinite(w.lambda)) {
    throw std::invalid_argument("CompProblem: non-finite iterate");
  }
  if (w.lambda < lambda_min_) {
    throw std::invalid_argument("CompProblem: lambda below lambda_min");
  }
}

double CompProblem::InnerValue(const CompositionalPoint& w, const Sample& s,
                               ClampStats* clamps) const {
  CheckPoint(w);
  double e = oracle_->Loss(w.x, s) / w.lambda;
  if (e > kExpClamp) {
    if (clamps != nullptr) ++clamps->events;
    e = kExpClamp;
  }
  return std::exp(e);
}

CompProblem::InnerGrad CompProblem::InnerGradAt(const CompositionalPoint& w,
                                                const Sample& s,
                                                ClampStats* clamps) const {
  const double loss = oracle_->Loss(w.x, s);
  const double g = InnerValue(w, s, clamps);
  InnerGrad out;
  out.x = (g / w.lambda) * oracle_->LossGrad(w.x, s);
  out.lambda = g * (-loss / (w.lambda * w.lambda));
  return out;
}

double CompProblem::FullInnerMean(const CompositionalPoint& w,
                                  ClampStats* clamps) const {
  double sum = 0;
  for (int i = 0; i < data_->size(); ++i) {
    sum += InnerValue(w, data_->sample(i), clamps);
  }
  return sum / data_->size();
}

double CompProblem::Objective(const CompositionalPoint& w) const {
  CheckPoint(w);
  const int n = data_->size();
  std::vector<double> scaled(static_cast<size_t>(n));
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    scaled[i] = oracle_->Loss(w.x, data_->sample(i)) / w.lambda;
    shift = std::max(shift, scaled[i]);
  }
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += std::exp(scaled[i] - shift);
  // lambda * (shift + log(sum/n)) = lambda * log((1/n) sum exp(loss/lambda))
  return w.lambda * (shift + std::log(sum / n)) + w.lambda * rho_;
}

Eigen::VectorXd CompProblem::TrueGradient(const CompositionalPoint& w) const {
  CheckPoint(w);
  const int n = data_->size();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(oracle_->dim());
  double u = 0;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    const InnerGrad g = InnerGradAt(w, data_->sample(i));
    v += g.x;
    u += g.lambda;
    s += InnerValue(w, data_->sample(i));
  }
  v /= n;
  u /= n;
  s /= n;
  return AssembleZ(w.lambda, s, v, u, rho_);
}

double CompProblem::TrueGradientNorm(const CompositionalPoint& w) const {
  return TrueGradient(w).norm();
}

Eigen::VectorXd AssembleZ(double lambda, double s, const Eigen::VectorXd& v,
                          double u, double rho, bool clamp_s,
                          ClampStats* clamps) {
  if (clamp_s) {
    const double s_hi = std::exp(CompProblem::kExpClamp);
    if (s < 1.0 || s > s_hi) {
      if (clamps != nullptr) ++clamps->events;
      s = s < 1.0 ? 1.0 : s_hi;
    }
  } else if (s <= 0.0) {
    throw std::runtime_error("AssembleZ: non-positive inner estimate");
  }
  const int d = static_cast<int>(v.size());
  Eigen::VectorXd z(d + 1);
  z.head(d) = (lambda / s) * v;
  z[d] = (lambda / s) * u + std::log(s) + rho;
  return z;
}

}  // namespace drodp
