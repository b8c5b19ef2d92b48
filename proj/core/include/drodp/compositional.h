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

#ifndef DRODP_COMPOSITIONAL_H_
#define DRODP_COMPOSITIONAL_H_

#include <Eigen/Core>

#include "drodp/dataset.h"
#include "drodp/dual_objective.h"
#include "drodp/loss.h"

namespace drodp {

struct CompositionalPoint {
  Eigen::VectorXd x;
  double lambda = 1.0;
};

// The KL-specific compositional objective
//   Psi(x, lambda) = lambda * log( (1/n) sum_i exp(loss_i(x)/lambda) )
//                    + lambda * rho,   lambda >= lambda_min,
// i.e. f(g(w)) with inner map g(w) = [lambda, (1/n) sum exp(loss/lambda)]
// and outer map f(g) = g1 log(g2) + g1 rho. Per-sample inner values are
// g(w; xi) = exp(loss(x;xi)/lambda), with the exponent clamped at 700.
class CompProblem {
 public:
  CompProblem(const Dataset* data, const LossOracle* oracle, double rho,
              double lambda_min);

  // g(w; xi)
  double InnerValue(const CompositionalPoint& w, const Sample& s,
                    ClampStats* clamps = nullptr) const;

  struct InnerGrad {
    Eigen::VectorXd x;    // exp(loss/lambda) * grad loss / lambda
    double lambda = 0.0;  // exp(loss/lambda) * (-loss / lambda^2)
  };
  InnerGrad InnerGradAt(const CompositionalPoint& w, const Sample& s,
                        ClampStats* clamps = nullptr) const;

  // g2(w): mean inner value over the full dataset (index order).
  double FullInnerMean(const CompositionalPoint& w,
                       ClampStats* clamps = nullptr) const;

  // Max-shifted log-sum-exp evaluation; finite whenever loss/lambda <= 1e6.
  double Objective(const CompositionalPoint& w) const;

  // Exact full-data gradient (d+1 coordinates) and its norm; evaluation-only.
  Eigen::VectorXd TrueGradient(const CompositionalPoint& w) const;
  double TrueGradientNorm(const CompositionalPoint& w) const;

  const Dataset& data() const { return *data_; }
  const LossOracle& oracle() const { return *oracle_; }
  double rho() const { return rho_; }
  double lambda_min() const { return lambda_min_; }

  static constexpr double kExpClamp = 700.0;

 private:
  void CheckPoint(const CompositionalPoint& w) const;

  const Dataset* data_;
  const LossOracle* oracle_;
  double rho_;
  double lambda_min_;
};

// z_t assembly for the recursive optimizer:
//   z[0..d-1] = (lambda / s) * v            (df/dg2 = g1/g2 with g1 = lambda)
//   z[d]      = (lambda / s) * u + log(s) + rho
// s is clamped to [1, exp(700)] first (losses are non-negative, so the exact
// inner mean is >= 1); pass clamp_s = false to get a std::runtime_error on
// s <= 0 instead.
Eigen::VectorXd AssembleZ(double lambda, double s, const Eigen::VectorXd& v,
                          double u, double rho, bool clamp_s = true,
                          ClampStats* clamps = nullptr);

}  // namespace drodp

#endif  // DRODP_COMPOSITIONAL_H_
