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

#include "drodp/rng.h"
#include "gtest/gtest.h"
#include "testing/finite_diff.h"

namespace drodp {
namespace {

Sample MakeSample(std::initializer_list<double> features, double label) {
  Sample s;
  s.features = Eigen::VectorXd(static_cast<long>(features.size()));
  int i = 0;
  for (double f : features) s.features[i++] = f;
  s.label = label;
  return s;
}

// Smoothed hinge on unit features: G = 1, L = 1. Margin at x is y * x[0].
Dataset UnitHingeData() {
  return Dataset({MakeSample({1.0}, 1.0), MakeSample({1.0}, -1.0)});
}

// Two samples whose smoothed-hinge losses at x = (0.5, 0.5) are exactly
// {0, 1}: margins 1 and -0.5.
Dataset TwoPointData() {
  return Dataset({MakeSample({2.0, 0.0}, 1.0), MakeSample({0.0, 1.0}, -1.0)});
}

// Logistic data in a working range where the partial-smoothness constants
// are provable: feature norms <= 2, so G = 2 >= L = 1.
Dataset WorkingRangeData(int n, int d, uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> samples;
  for (int i = 0; i < n; ++i) {
    Sample s;
    s.features = Eigen::VectorXd(d);
    for (int j = 0; j < d; ++j) s.features[j] = rng.NextGaussian();
    s.features *= 2.0 / std::max(s.features.norm(), 1.0);
    s.label = i % 2 == 0 ? 1.0 : -1.0;
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples));
}

Eigen::VectorXd RandomInBall(Rng& rng, int dim, double radius) {
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) x[i] = rng.NextGaussian();
  const double norm = x.norm();
  if (norm > 0) x *= radius * rng.NextUniform() / norm;
  return x;
}

TEST(SmoothnessConstants, LemmaOneFormulas) {
  const SmoothnessConstants c = ComputeSmoothnessConstants(1, 2, 1, 0.5, 1, 1);
  EXPECT_DOUBLE_EQ(c.l0, 3.0);
  EXPECT_DOUBLE_EQ(c.l1, 2.0);
  EXPECT_DOUBLE_EQ(c.l2, 2.0);
}

TEST(SmoothnessConstants, LemmaTwoFormulas) {
  const SmoothnessConstants c = ComputeSmoothnessConstants(1, 1, 1, 1, 1, 1);
  EXPECT_DOUBLE_EQ(c.d0, 18.0);
  EXPECT_DOUBLE_EQ(c.d1, 8.0);
  EXPECT_DOUBLE_EQ(c.d2, 1.0);
}

TEST(SmoothnessConstants, GradientBoundFormula) {
  const SmoothnessConstants c = ComputeSmoothnessConstants(1, 1, 1, 1, 1, 1);
  EXPECT_DOUBLE_EQ(c.h0, 5.0);  // 2 + 2 + 1
}

TEST(SmoothnessConstants, MatchesIndependentRecomputation) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const double g = 0.1 + 5 * rng.NextUniform();
    const double l = 0.1 + 5 * rng.NextUniform();
    const double m = 0.1 + 3 * rng.NextUniform();
    const double lambda = 0.1 + 2 * rng.NextUniform();
    const double sigma = 0.1 + rng.NextUniform();
    const double s0 = 0.5 + 5 * rng.NextUniform();
    const SmoothnessConstants c =
        ComputeSmoothnessConstants(g, l, m, lambda, sigma, s0);
    EXPECT_DOUBLE_EQ(c.l0, g + g * g * m / lambda);
    EXPECT_DOUBLE_EQ(c.l1, l / g);
    EXPECT_DOUBLE_EQ(c.l2, g * g * m / lambda);
    EXPECT_DOUBLE_EQ(c.d0, 8 * g * g + 10 * g * g * m * m * sigma * sigma /
                               (lambda * lambda));
    EXPECT_DOUBLE_EQ(c.d1, 8.0);
    EXPECT_DOUBLE_EQ(c.d2, g * g * m * m * sigma * sigma / (lambda * lambda));
    EXPECT_DOUBLE_EQ(c.h0, 2 * std::pow(s0, 3) * std::sqrt(m) +
                               2 * m * std::pow(s0, 4) + 1);
  }
}

TEST(SmoothnessConstants, RejectsNonPositiveInputs) {
  EXPECT_THROW(ComputeSmoothnessConstants(0, 1, 1, 1, 1, 1),
               std::invalid_argument);
  EXPECT_THROW(ComputeSmoothnessConstants(1, 1, 1, -1, 1, 1),
               std::invalid_argument);
}

TEST(DualProblem, SampleLossKlAtArgumentZero) {
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  ASSERT_DOUBLE_EQ(oracle.lipschitz_g(), 1.0);
  const DualProblem problem(&data, &oracle, Divergence::Kl(), 1.0);
  // Sample 0 at x = 1.5 has margin 1.5 -> loss 0; eta = 0 -> argument 0.
  Eigen::VectorXd x(1);
  x << 1.5;
  EXPECT_NEAR(problem.SampleLoss(DualPoint{x, 0.0}, data.sample(0)), 0.0, 1e-15);
}

TEST(DualProblem, SampleLossChiSquare) {
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  const DualProblem problem(&data, &oracle, Divergence::ChiSquare(), 1.0);
  // Sample 1 (label -1) at x = 0.5: margin -0.5 -> loss 1; eta = 0:
  // lambda psi*(1) = -1 + 9/4 = 1.25.
  Eigen::VectorXd x(1);
  x << 0.5;
  EXPECT_DOUBLE_EQ(problem.SampleLoss(DualPoint{x, 0.0}, data.sample(1)), 1.25);
}

TEST(DualProblem, SampleLossAtMatchedEta) {
  // All losses equal to c and eta = c / G gives lambda psi*(0) + c.
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  Eigen::VectorXd x(1);
  x << 0.5;  // loss of sample 1 is exactly 1
  const double c = 1.0;
  for (const Divergence& div :
       {Divergence::ChiSquare(), Divergence::Kl(), Divergence::KlRegCvar(0.25),
        Divergence::CressieRead(2.0)}) {
    const double lambda = 0.7;
    const DualProblem problem(&data, &oracle, div, lambda);
    const DualPoint p{x, c / problem.eta_scale_g()};
    EXPECT_NEAR(problem.SampleLoss(p, data.sample(1)),
                lambda * div.PsiStar(0.0) + c, 1e-12)
        << div.ToString();
  }
}

TEST(DualProblem, EtaGradZeroAtMatchedLosses) {
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  Eigen::VectorXd x(1);
  x << 0.5;
  const std::vector<int> batch{1};
  // KL: (psi*)'(0) = 1, so the gradient vanishes when losses match G eta.
  const DualProblem kl(&data, &oracle, Divergence::Kl(), 1.0);
  EXPECT_NEAR(kl.BatchEtaGrad(DualPoint{x, 1.0}, batch), 0.0, 1e-12);
  // Chi-square at loss 0, eta 0: 1 - (0+2)/2 = 0.
  const DualProblem chi(&data, &oracle, Divergence::ChiSquare(), 1.0);
  Eigen::VectorXd x0(1);
  x0 << 1.5;
  const std::vector<int> batch0{0};
  EXPECT_NEAR(chi.BatchEtaGrad(DualPoint{x0, 0.0}, batch0), 0.0, 1e-12);
}

TEST(DualProblem, XGradReducesToLossGrad) {
  // Single sample with conjugate argument 0 under KL: the x-gradient is
  // exactly the loss gradient.
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  const DualProblem problem(&data, &oracle, Divergence::Kl(), 1.0);
  Eigen::VectorXd x(1);
  x << 0.5;
  const DualPoint p{x, 1.0};
  const std::vector<int> batch{1};
  const Eigen::VectorXd grad = problem.BatchXGrad(p, batch);
  const Eigen::VectorXd loss_grad = oracle.LossGrad(x, data.sample(1));
  EXPECT_LT((grad - loss_grad).norm(), 1e-12);
}

TEST(DualProblem, XGradZeroWhereLossGradsVanish) {
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  const DualProblem problem(&data, &oracle, Divergence::ChiSquare(), 1.0);
  Eigen::VectorXd x(1);
  x << 1.5;  // sample 0 margin 1.5: flat region, zero loss gradient
  const std::vector<int> batch{0};
  EXPECT_EQ(problem.BatchXGrad(DualPoint{x, 0.3}, batch).norm(), 0.0);
}

TEST(DualProblem, GradientsMatchFiniteDifferences) {
  const Dataset data = WorkingRangeData(12, 3, 5);
  const LossOracle oracle = LossOracle::For(LossKind::kLogistic, data);
  Rng rng(17);
  for (const Divergence& div :
       {Divergence::ChiSquare(), Divergence::Kl(), Divergence::KlRegCvar(0.25),
        Divergence::CressieRead(2.0)}) {
    const DualProblem problem(&data, &oracle, div, 1.0);
    std::vector<int> batch(data.size());
    std::iota(batch.begin(), batch.end(), 0);
    for (int trial = 0; trial < 25; ++trial) {
      const Eigen::VectorXd x = RandomInBall(rng, 3, 1.2);
      const double eta = 2.0 * rng.NextUniform() - 1.0;
      const Eigen::VectorXd gx = problem.BatchXGrad(DualPoint{x, eta}, batch);
      const Eigen::VectorXd fd_x = testing::CentralGradient(
          [&](const Eigen::VectorXd& p) {
            return problem.BatchObjective(DualPoint{p, eta}, batch);
          },
          x, 1e-5);
      EXPECT_LT(testing::RelativeError(gx, fd_x), 1e-5) << div.ToString();

      const double ge = problem.BatchEtaGrad(DualPoint{x, eta}, batch);
      const double fd_e = testing::CentralDiff(
          [&](double e) {
            return problem.BatchObjective(DualPoint{x, e}, batch);
          },
          eta, 1e-5);
      EXPECT_NEAR(ge, fd_e, 1e-5 * (1 + std::abs(fd_e))) << div.ToString();
    }
  }
}

TEST(DualProblem, KlDualityClosedForm) {
  // min_eta L(x, eta) = lambda log((1/n) sum exp(loss_i / lambda)); the
  // 2-point instance with losses {0, 1} gives log((1 + e)/2).
  const Dataset data = TwoPointData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  const DualProblem problem(&data, &oracle, Divergence::Kl(), 1.0);
  Eigen::VectorXd x(2);
  x << 0.5, 0.5;
  ASSERT_DOUBLE_EQ(oracle.Loss(x, data.sample(0)), 0.0);
  ASSERT_DOUBLE_EQ(oracle.Loss(x, data.sample(1)), 1.0);
  const double eta_star = problem.MinimizeEta(x);
  const double value = problem.FullObjective(DualPoint{x, eta_star});
  EXPECT_NEAR(value, std::log((1.0 + std::exp(1.0)) / 2.0), 1e-8);
  EXPECT_NEAR(value, 0.62011, 1e-5);
}

TEST(DualProblem, KlDualityOnRandomPoints) {
  const Dataset data = WorkingRangeData(50, 3, 9);
  const LossOracle oracle = LossOracle::For(LossKind::kLogistic, data);
  const double lambda = 1.0;
  const DualProblem problem(&data, &oracle, Divergence::Kl(), lambda);
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd x = RandomInBall(rng, 3, 1.2);
    const double eta_star = problem.MinimizeEta(x);
    const double dual_value = problem.FullObjective(DualPoint{x, eta_star});
    double sum = 0;
    for (int i = 0; i < data.size(); ++i) {
      sum += std::exp(oracle.Loss(x, data.sample(i)) / lambda);
    }
    const double closed_form = lambda * std::log(sum / data.size());
    EXPECT_NEAR(dual_value, closed_form, 1e-8);
  }
}

TEST(DualProblem, ChiSquareMinimizerMatchesGridSearch) {
  const Dataset data = WorkingRangeData(10, 2, 3);
  const LossOracle oracle = LossOracle::For(LossKind::kLogistic, data);
  const DualProblem problem(&data, &oracle, Divergence::ChiSquare(), 1.0);
  Eigen::VectorXd x(2);
  x << 0.4, -0.2;
  const double eta_star = problem.MinimizeEta(x);
  const double best = problem.FullObjective(DualPoint{x, eta_star});
  double grid_best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200000; ++i) {
    const double eta = -5.0 + 10.0 * i / 200000.0;
    grid_best = std::min(grid_best, problem.FullObjective(DualPoint{x, eta}));
  }
  EXPECT_NEAR(best, grid_best, 1e-6);
  EXPECT_LE(best, grid_best + 1e-12);
}

TEST(DualProblem, TrueGradientNormZeroAtFlatPoint) {
  // One-sided hinge data: at x = 3 both margins exceed 1, so every loss and
  // loss gradient is identically zero.
  const Dataset data = Dataset({MakeSample({1.0}, 1.0), MakeSample({0.5}, 1.0)});
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  const DualProblem problem(&data, &oracle, Divergence::ChiSquare(), 1.0);
  Eigen::VectorXd x(1);
  x << 3.0;
  EXPECT_EQ(problem.TrueGradientNorm(x), 0.0);
}

TEST(DualProblem, MinimizeEtaThrowsWithoutBracket) {
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  // S0 = 0.01 shrinks the bracket to [-0.1, 0.1]; the chi-square minimizer
  // sits near the mean loss (~0.75), outside it.
  const DualProblem problem(&data, &oracle, Divergence::ChiSquare(0.01), 1.0);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
  EXPECT_THROW(problem.MinimizeEta(x), std::runtime_error);
}

// Lemma-style empirical inequalities in the provable working range (feature
// norms <= 2 so G >= L; iterates and eta small enough that conjugate
// arguments stay inside [-S0, S0]).
TEST(DualProblem, PartialSmoothnessAndContinuityInequalities) {
  const Dataset data = WorkingRangeData(20, 3, 11);
  const LossOracle oracle = LossOracle::For(LossKind::kLogistic, data);
  const double lambda = 1.0;
  Rng rng(29);
  for (const Divergence& div : {Divergence::ChiSquare(), Divergence::Kl()}) {
    const DualProblem problem(&data, &oracle, div, lambda);
    const SmoothnessConstants c = ComputeSmoothnessConstants(
        oracle.lipschitz_g(), oracle.smooth_l(), div.smooth_m(), lambda, 1.0,
        div.domain_bound_s0());
    const double g_scale = problem.eta_scale_g();
    for (int trial = 0; trial < 500; ++trial) {
      const Eigen::VectorXd x = RandomInBall(rng, 3, 0.9);
      const Eigen::VectorXd x2 = x + RandomInBall(rng, 3, 0.5);
      const double eta = 2.0 * rng.NextUniform() - 1.0;
      const double eta2 = 2.0 * rng.NextUniform() - 1.0;

      // Partially generalized smoothness in x.
      const double lhs_x = (problem.FullXGrad(DualPoint{x, eta}) -
                            problem.FullXGrad(DualPoint{x2, eta}))
                               .norm();
      const double eta_grad = problem.FullEtaGrad(DualPoint{x, eta});
      EXPECT_LE(lhs_x, (c.l0 + c.l1 * std::abs(eta_grad)) * (x - x2).norm() *
                           (1.0 + 1e-6))
          << div.ToString();

      // Smoothness in eta (the extra G comes from the eta rescaling).
      const double lhs_eta = std::abs(problem.FullEtaGrad(DualPoint{x, eta}) -
                                      problem.FullEtaGrad(DualPoint{x, eta2}));
      EXPECT_LE(lhs_eta, c.l2 * g_scale * std::abs(eta - eta2) * (1.0 + 1e-6))
          << div.ToString();

      // Per-sample cross continuity in x.
      const Sample& s = data.sample(static_cast<int>(rng.NextInt(data.size())));
      const double lhs_cross =
          std::abs(problem.PerSampleEtaGrad(DualPoint{x, eta}, s) -
                   problem.PerSampleEtaGrad(DualPoint{x2, eta}, s));
      EXPECT_LE(lhs_cross, c.l2 * (x - x2).norm() * (1.0 + 1e-6))
          << div.ToString();

      // Dual-gradient bound.
      EXPECT_LE(std::abs(eta_grad), c.h0) << div.ToString();
    }
  }
}

TEST(DualProblem, ClampCounterTracksOutOfRangeArguments) {
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  const DualProblem problem(&data, &oracle, Divergence::Kl(), 0.01);
  Eigen::VectorXd x(1);
  x << 0.5;  // loss 1 at sample 1; conjugate argument 100 with lambda = 0.01
  ClampStats clamps;
  problem.SampleLoss(DualPoint{x, 0.0}, data.sample(1), &clamps);
  EXPECT_EQ(clamps.events, 1);
}

TEST(DualProblem, ErrorPaths) {
  const Dataset data = UnitHingeData();
  const LossOracle oracle = LossOracle::For(LossKind::kSmoothedHinge, data);
  const DualProblem problem(&data, &oracle, Divergence::Kl(), 1.0);
  Eigen::VectorXd x(1);
  x << 0.5;
  EXPECT_THROW(problem.BatchEtaGrad(DualPoint{x, 0.0}, {}),
               std::invalid_argument);
  Eigen::VectorXd bad(1);
  bad << std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(problem.SampleLoss(DualPoint{bad, 0.0}, data.sample(0)),
               std::invalid_argument);
  EXPECT_THROW(DualProblem(&data, &oracle, Divergence::Kl(), 0.0),
               std::invalid_argument);
}

TEST(EstimateSigmaVar, PositiveAndDeterministic) {
  const Dataset data = WorkingRangeData(40, 3, 13);
  const LossOracle oracle = LossOracle::For(LossKind::kLogistic, data);
  const double a = EstimateSigmaVar(data, oracle);
  const double b = EstimateSigmaVar(data, oracle);
  EXPECT_GT(a, 0.0);
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace drodp
