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

#include "drodp/optimizers.h"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace drodp {
namespace {

constexpr double kDivergenceGuard = 1e6;
constexpr double kMovementFloor = 1e-12;

// Sub-stream labels; every (purpose, estimator, iteration) triple is its own
// stream, so sigma = 0 paths can skip draws without shifting anything else.
constexpr uint64_t kStreamNoiseEta = 1;
constexpr uint64_t kStreamNoiseX = 2;
constexpr uint64_t kStreamNoiseS = 3;
constexpr uint64_t kStreamBatchEta = 11;
constexpr uint64_t kStreamBatchX = 12;
constexpr uint64_t kStreamSampleS = 13;
constexpr uint64_t kStreamTau = 99;

double ScalarNoise(Rng stream, double sigma) {
  if (sigma == 0) return 0.0;
  return sigma * stream.NextGaussian();
}

Eigen::VectorXd VectorNoise(Rng stream, double sigma, int dim) {
  return GaussianNoise(stream, sigma, dim);
}

long ResolveBatch(long requested, long fallback, long n, const char* what) {
  const long value = requested > 0 ? requested : std::min(fallback, n);
  if (value < 1 || value > n) {
    throw std::invalid_argument(std::string("optimizer: batch size ") + what +
                                " must be in [1, n]");
  }
  return value;
}

struct Stopwatch {
  explicit Stopwatch(bool enabled) : enabled_(enabled) {
    if (enabled_) start_ = std::chrono::steady_clock::now();
  }
  double ElapsedMs() const {
    if (!enabled_) return 0.0;
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(now - start_).count();
  }
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

bool IsEvalStep(long t, long t_total, long eval_every) {
  if (t == t_total - 1) return true;
  return eval_every > 0 && t % eval_every == 0;
}

void FinalizeTrace(RunTrace& trace) {
  trace.best_true_grad_norm = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : trace.rows) {
    if (row.true_grad_norm.has_value()) {
      trace.best_true_grad_norm =
          std::min(trace.best_true_grad_norm, *row.true_grad_norm);
    }
  }
  if (!trace.rows.empty()) {
    trace.final_objective = trace.rows.back().objective;
    trace.clamp_count = trace.rows.back().clamps;
    if (trace.rows.back().true_grad_norm.has_value()) {
      trace.final_true_grad_norm = *trace.rows.back().true_grad_norm;
    }
  }
}

}  // namespace

ClipMode ParseClipMode(const std::string& name) {
  if (name == "as-written") return ClipMode::kAsWritten;
  if (name == "batch-mean") return ClipMode::kBatchMean;
  if (name == "per-sample") return ClipMode::kPerSample;
  throw std::invalid_argument("unknown clip mode: " + name);
}

std::string ClipModeName(ClipMode mode) {
  switch (mode) {
    case ClipMode::kAsWritten:
      return "as-written";
    case ClipMode::kBatchMean:
      return "batch-mean";
    case ClipMode::kPerSample:
      return "per-sample";
  }
  return "?";
}

ResolvedBatches ResolveDoubleSpiderBatches(const DoubleSpiderConfig& config,
                                           long n) {
  ResolvedBatches b;
  b.refresh_scalar = ResolveBatch(config.n1, n, n, "N1");
  b.increment_scalar = ResolveBatch(config.n2, config.q, n, "N2");
  b.refresh_x = ResolveBatch(config.n3, n, n, "N3");
  b.increment_x = ResolveBatch(config.n4, config.q, n, "N4");
  return b;
}

ResolvedBatches ResolveRecursiveBatches(const RecursiveSpiderConfig& config,
                                        long n) {
  ResolvedBatches b;
  b.refresh_x = ResolveBatch(config.b1, n, n, "b1");
  b.increment_x = ResolveBatch(config.b2, config.q, n, "b2");
  b.refresh_scalar = ResolveBatch(config.b3, n, n, "b3");
  b.increment_scalar = ResolveBatch(config.b4, config.q, n, "b4");
  return b;
}

RunTrace DpDoubleSpider(const DualProblem& problem,
                        const DoubleSpiderConfig& config, const NoisePlan& plan,
                        Rng rng, const DoubleSpiderObserver& observer) {
  const long n = problem.data().size();
  const int d = problem.oracle().dim();
  if (config.t < 1 || config.q < 1 || config.t % config.q != 0) {
    throw std::invalid_argument("DpDoubleSpider: q must divide T");
  }
  const ResolvedBatches batches_resolved = ResolveDoubleSpiderBatches(config, n);
  const long n1 = batches_resolved.refresh_scalar;
  const long n2 = batches_resolved.increment_scalar;
  const long n3 = batches_resolved.refresh_x;
  const long n4 = batches_resolved.increment_x;
  const SmoothnessConstants& sc = config.constants;
  const double alpha = config.alpha > 0 ? config.alpha : 1.0 / (4.0 * sc.l2);
  const bool per_sample_clip = config.clip_mode == ClipMode::kPerSample;
  const double g_lip = problem.eta_scale_g();

  Rng noise_eta = rng.Split(kStreamNoiseEta);
  Rng noise_x = rng.Split(kStreamNoiseX);
  Rng batch_eta = rng.Split(kStreamBatchEta);
  Rng batch_x = rng.Split(kStreamBatchX);
  const long tau = 1 + rng.Split(kStreamTau).NextInt(config.t);

  const Stopwatch clock(config.timing);
  ClampStats clamps;
  RunTrace trace;
  trace.rows.reserve(static_cast<size_t>(config.t));
  trace.output_index = tau;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  double eta = 0;
  Eigen::VectorXd x_prev = x;
  double eta_prev = eta;
  double g = 0;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);

  for (long t = 0; t < config.t; ++t) {
    const bool refresh = t % config.q == 0;
    const DualPoint here{x, eta};
    const DualPoint lagged{x_prev, eta_prev};

    // eta estimator
    if (refresh) {
      const std::vector<int> batch =
          batch_eta.Split(static_cast<uint64_t>(t))
              .SampleWithoutReplacement(static_cast<int>(n),
                                        static_cast<int>(n1));
      double estimate;
      if (per_sample_clip) {
        double sum = 0;
        for (int i : batch) {
          sum += ClipScalar(
              problem.PerSampleEtaGrad(here, problem.data().sample(i), &clamps),
              config.thresholds.c1);
        }
        estimate = sum / static_cast<double>(batch.size());
      } else {
        estimate = ClipScalar(problem.BatchEtaGrad(here, batch, &clamps),
                              config.thresholds.c1);
      }
      g = estimate +
          ScalarNoise(noise_eta.Split(static_cast<uint64_t>(t)), plan.sigma1);
    } else {
      double c2 = config.thresholds.c2;
      double sigma2 = plan.sigma2;
      if (config.movement_thresholds) {
        const double d_eta = std::abs(eta - eta_prev);
        const double d_x = (x - x_prev).norm();
        c2 = std::max(2.0 * std::max(sc.l2 * d_eta, (sc.l2 / g_lip) * d_x),
                      kMovementFloor * config.thresholds.c2);
        sigma2 = plan.sigma2_unit * c2;
      }
      const std::vector<int> batch =
          batch_eta.Split(static_cast<uint64_t>(t))
              .SampleWithoutReplacement(static_cast<int>(n),
                                        static_cast<int>(n2));
      double estimate;
      if (per_sample_clip) {
        double sum = 0;
        for (int i : batch) {
          const Sample& s = problem.data().sample(i);
          sum += ClipScalar(problem.PerSampleEtaGrad(here, s, &clamps) -
                                problem.PerSampleEtaGrad(lagged, s, &clamps),
                            c2);
        }
        estimate = sum / static_cast<double>(batch.size());
      } else {
        estimate = ClipScalar(problem.BatchEtaGrad(here, batch, &clamps) -
                                  problem.BatchEtaGrad(lagged, batch, &clamps),
                              c2);
      }
      g = estimate + g +
          ScalarNoise(noise_eta.Split(static_cast<uint64_t>(t)), sigma2);
    }
    const double eta_next = eta - alpha * g;

    // x estimator; fresh term at (x_t, eta_{t+1}), lagged at (x_{t-1}, eta_t)
    const DualPoint fresh_pt{x, eta_next};
    const DualPoint lagged_pt{x_prev, eta};
    if (refresh) {
      const std::vector<int> batch =
          batch_x.Split(static_cast<uint64_t>(t))
              .SampleWithoutReplacement(static_cast<int>(n),
                                        static_cast<int>(n3));
      Eigen::VectorXd estimate;
      if (per_sample_clip) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
        for (int i : batch) {
          sum += Clip(
              problem.PerSampleXGrad(fresh_pt, problem.data().sample(i), &clamps),
              config.thresholds.c3);
        }
        estimate = sum / static_cast<double>(batch.size());
      } else {
        estimate = Clip(problem.BatchXGrad(fresh_pt, batch, &clamps),
                        config.thresholds.c3);
      }
      v = estimate +
          VectorNoise(noise_x.Split(static_cast<uint64_t>(t)), plan.sigma3, d);
    } else {
      double c4 = config.thresholds.c4;
      double sigma4 = plan.sigma4;
      if (config.movement_thresholds) {
        const double d_eta = std::abs(eta_next - eta);
        const double d_x = (x - x_prev).norm();
        const double h_term = sc.l0 + sc.l1 * std::sqrt(sc.h0);
        c4 = std::max(
            2.0 * std::max((sc.l1 * sc.l2 / g_lip) * d_eta, h_term * d_x),
            kMovementFloor * config.thresholds.c4);
        sigma4 = plan.sigma4_unit * c4;
      }
      const std::vector<int> batch =
          batch_x.Split(static_cast<uint64_t>(t))
              .SampleWithoutReplacement(static_cast<int>(n),
                                        static_cast<int>(n4));
      Eigen::VectorXd estimate;
      if (per_sample_clip) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
        for (int i : batch) {
          const Sample& s = problem.data().sample(i);
          sum += Clip(problem.PerSampleXGrad(fresh_pt, s, &clamps) -
                          problem.PerSampleXGrad(lagged_pt, s, &clamps),
                      c4);
        }
        estimate = sum / static_cast<double>(batch.size());
      } else {
        estimate = Clip(problem.BatchXGrad(fresh_pt, batch, &clamps) -
                            problem.BatchXGrad(lagged_pt, batch, &clamps),
                        c4);
      }
      v = estimate + v +
          VectorNoise(noise_x.Split(static_cast<uint64_t>(t)), sigma4, d);
    }

    double beta = config.beta;
    if (!(beta > 0)) {
      const double fixed = 1.0 / (2.0 * sc.l0 + sc.l1 * std::sqrt(sc.h0));
      const double norm_v = v.norm();
      beta = norm_v > 0
                 ? std::min(fixed, 1.0 / (sc.l0 * std::sqrt(double(n)) * norm_v))
                 : fixed;
    }

    if (observer) observer({t, x, eta, eta_next, g, v});

    const Eigen::VectorXd x_next = x - beta * v;
    if (!x_next.allFinite() || !std::isfinite(eta_next) ||
        x_next.norm() > kDivergenceGuard) {
      trace.aborted = true;
      trace.abort_reason = "divergent iterate at t=" + std::to_string(t);
      break;
    }

    x_prev = x;
    eta_prev = eta;
    x = x_next;
    eta = eta_next;

    TraceRow row;
    row.t = t;
    row.est_norm_x = v.norm();
    row.est_norm_eta = std::abs(g);
    if (IsEvalStep(t, config.t, config.eval_every)) {
      row.true_grad_norm = problem.TrueGradientNorm(x);
    }
    row.objective = problem.FullObjective(DualPoint{x, eta});
    row.clamps = clamps.events;
    row.wall_ms = clock.ElapsedMs();
    trace.rows.push_back(std::move(row));

    if (t + 1 == tau) {
      trace.output_x = x;
      trace.output_scalar = eta;
    }
  }

  trace.final_x = x;
  trace.final_scalar = eta;
  trace.runtime_ms = clock.ElapsedMs();
  FinalizeTrace(trace);
  return trace;
}

RunTrace DpRecursiveSpider(const CompProblem& problem,
                           const RecursiveSpiderConfig& config,
                           const NoisePlan& plan, Rng rng,
                           const RecursiveSpiderObserver& observer) {
  const long n = problem.data().size();
  const int d = problem.oracle().dim();
  if (config.t < 1 || config.q < 1 || config.t % config.q != 0) {
    throw std::invalid_argument("DpRecursiveSpider: q must divide T");
  }
  const ResolvedBatches batches_resolved = ResolveRecursiveBatches(config, n);
  const long b1 = batches_resolved.refresh_x;
  const long b2 = batches_resolved.increment_x;
  const long b3 = batches_resolved.refresh_scalar;
  const long b4 = batches_resolved.increment_scalar;
  const bool batch_mean_clip = config.clip_mode == ClipMode::kBatchMean;

  Rng noise_x = rng.Split(kStreamNoiseX);
  Rng noise_eta = rng.Split(kStreamNoiseEta);
  Rng noise_s = rng.Split(kStreamNoiseS);
  Rng batch_x = rng.Split(kStreamBatchX);
  Rng batch_eta = rng.Split(kStreamBatchEta);
  Rng sample_s = rng.Split(kStreamSampleS);
  const long tau = 1 + rng.Split(kStreamTau).NextInt(config.t);

  const Stopwatch clock(config.timing);
  ClampStats clamps;
  RunTrace trace;
  trace.rows.reserve(static_cast<size_t>(config.t));
  trace.output_index = tau;

  CompositionalPoint w{Eigen::VectorXd::Zero(d),
                       std::max(1.0, problem.lambda_min())};
  CompositionalPoint w_prev = w;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  double u = 0;
  double s_est = 1.0;

  for (long t = 0; t < config.t; ++t) {
    const double eta_t =
        config.eta_adaptive
            ? config.eta_k / std::cbrt(config.eta_m + t * config.eta_sigma_sq)
            : config.eta_step;
    const double beta_t = std::min(1.0, config.beta_momentum_c * eta_t * eta_t);
    const bool refresh = t % config.q == 0;

    if (refresh) {
      const std::vector<int> bx =
          batch_x.Split(static_cast<uint64_t>(t))
              .SampleWithoutReplacement(static_cast<int>(n),
                                        static_cast<int>(b1));
      Eigen::VectorXd est_v = Eigen::VectorXd::Zero(d);
      for (int i : bx) {
        const auto grad = problem.InnerGradAt(w, problem.data().sample(i), &clamps);
        est_v += batch_mean_clip ? grad.x : Clip(grad.x, config.thresholds.c1);
      }
      est_v /= static_cast<double>(bx.size());
      if (batch_mean_clip) est_v = Clip(est_v, config.thresholds.c1);
      v = est_v +
          VectorNoise(noise_x.Split(static_cast<uint64_t>(t)), plan.sigma1, d);

      const std::vector<int> bl =
          batch_eta.Split(static_cast<uint64_t>(t))
              .SampleWithoutReplacement(static_cast<int>(n),
                                        static_cast<int>(b3));
      double est_u = 0;
      for (int i : bl) {
        const double gl =
            problem.InnerGradAt(w, problem.data().sample(i), &clamps).lambda;
        est_u += batch_mean_clip ? gl : ClipScalar(gl, config.thresholds.c3);
      }
      est_u /= static_cast<double>(bl.size());
      if (batch_mean_clip) est_u = ClipScalar(est_u, config.thresholds.c3);
      u = est_u +
          ScalarNoise(noise_eta.Split(static_cast<uint64_t>(t)), plan.sigma3);
    } else {
      // Released-trajectory movement scales the increment noise, capped by
      // the threshold-scaled (hatted) sigma.
      const double move_x = (w.x - w_prev.x).norm();
      const double move_l = std::abs(w.lambda - w_prev.lambda);
      const double sens2 =
          std::min(std::max(move_x, kMovementFloor * config.thresholds.c2),
                   config.thresholds.c2);
      const double sens4 =
          std::min(std::max(move_l, kMovementFloor * config.thresholds.c4),
                   config.thresholds.c4);
      const double sigma2 = plan.sigma2_unit * sens2;
      const double sigma4 = plan.sigma4_unit * sens4;

      const std::vector<int> bx =
          batch_x.Split(static_cast<uint64_t>(t))
              .SampleWithoutReplacement(static_cast<int>(n),
                                        static_cast<int>(b2));
      Eigen::VectorXd est_v = Eigen::VectorXd::Zero(d);
      for (int i : bx) {
        const Sample& smp = problem.data().sample(i);
        const Eigen::VectorXd diff = problem.InnerGradAt(w, smp, &clamps).x -
                                     problem.InnerGradAt(w_prev, smp, &clamps).x;
        est_v += batch_mean_clip ? diff : Clip(diff, config.thresholds.c2);
      }
      est_v /= static_cast<double>(bx.size());
      if (batch_mean_clip) est_v = Clip(est_v, config.thresholds.c2);
      v = est_v + v +
          VectorNoise(noise_x.Split(static_cast<uint64_t>(t)), sigma2, d);

      const std::vector<int> bl =
          batch_eta.Split(static_cast<uint64_t>(t))
              .SampleWithoutReplacement(static_cast<int>(n),
                                        static_cast<int>(b4));
      double est_u = 0;
      for (int i : bl) {
        const Sample& smp = problem.data().sample(i);
        const double diff = problem.InnerGradAt(w, smp, &clamps).lambda -
                            problem.InnerGradAt(w_prev, smp, &clamps).lambda;
        est_u += batch_mean_clip ? diff : ClipScalar(diff, config.thresholds.c4);
      }
      est_u /= static_cast<double>(bl.size());
      if (batch_mean_clip) est_u = ClipScalar(est_u, config.thresholds.c4);
      u = est_u + u +
          ScalarNoise(noise_eta.Split(static_cast<uint64_t>(t)), sigma4);
    }

    // Recursive inner-value estimate from a single fresh sample.
    const int s_index = static_cast<int>(
        sample_s.Split(static_cast<uint64_t>(t)).NextInt(n));
    const Sample& xi0 = problem.data().sample(s_index);
    const double c_now =
        ClipScalar(problem.InnerValue(w, xi0, &clamps), config.thresholds.c5);
    double s_next;
    if (t == 0) {
      s_next = c_now;
    } else if (config.storm_conventional) {
      const double c_lag = ClipScalar(problem.InnerValue(w_prev, xi0, &clamps),
                                      config.thresholds.c5);
      s_next = c_now + (1.0 - beta_t) * (s_est - c_lag);
    } else {
      s_next = c_now + (1.0 - beta_t) * (s_est - c_now);
    }
    s_next +=
        ScalarNoise(noise_s.Split(static_cast<uint64_t>(t)), plan.sigma_s);
    if (s_next <= 0) {
      ++clamps.events;
      s_next = 1.0;
    }
    s_est = s_next;

    Eigen::VectorXd z =
        AssembleZ(w.lambda, s_est, v, u, problem.rho(), true, &clamps);
    if (config.exact_lambda_grad) {
      z[d] = problem.TrueGradient(w)[d];
    }

    if (observer) observer({t, w.x, w.lambda, v, u, s_est, z});

    CompositionalPoint w_next;
    w_next.x = w.x - eta_t * z.head(d);
    w_next.lambda =
        std::max(w.lambda - eta_t * z[d], problem.lambda_min());
    if (!w_next.x.allFinite() || !std::isfinite(w_next.lambda) ||
        w_next.x.norm() > kDivergenceGuard) {
      trace.aborted = true;
      trace.abort_reason = "divergent iterate at t=" + std::to_string(t);
      break;
    }

    w_prev = w;
    w = w_next;

    TraceRow row;
    row.t = t;
    row.est_norm_x = v.norm();
    row.est_norm_eta = std::abs(u);
    if (IsEvalStep(t, config.t, config.eval_every)) {
      row.true_grad_norm = problem.TrueGradientNorm(w);
    }
    row.objective = problem.Objective(w);
    row.clamps = clamps.events;
    row.wall_ms = clock.ElapsedMs();
    trace.rows.push_back(std::move(row));

    if (t + 1 == tau) {
      trace.output_x = w.x;
      trace.output_scalar = w.lambda;
    }
  }

  trace.final_x = w.x;
  trace.final_scalar = w.lambda;
  trace.runtime_ms = clock.ElapsedMs();
  FinalizeTrace(trace);
  return trace;
}

RunTrace DpSgda(const DualProblem& problem, const SgdaConfig& config, Rng rng) {
  const long n = problem.data().size();
  const int d = problem.oracle().dim();
  const long batch_size = ResolveBatch(config.batch, 32, n, "batch");
  if (config.t < 1) throw std::invalid_argument("DpSgda: T must be >= 1");

  const double sigma_eta =
      CalibrateSigma(2.0 * config.c_eta / batch_size, config.t, n, batch_size,
                     config.budget, config.mech_c);
  const double sigma_x =
      CalibrateSigma(2.0 * config.c_x / batch_size, config.t, n, batch_size,
                     config.budget, config.mech_c);

  Rng noise_eta = rng.Split(kStreamNoiseEta);
  Rng noise_x = rng.Split(kStreamNoiseX);
  Rng batches = rng.Split(kStreamBatchEta);
  const long tau = 1 + rng.Split(kStreamTau).NextInt(config.t);

  const Stopwatch clock(config.timing);
  ClampStats clamps;
  RunTrace trace;
  trace.rows.reserve(static_cast<size_t>(config.t));
  trace.output_index = tau;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  double eta = 0;

  for (long t = 0; t < config.t; ++t) {
    const std::vector<int> batch =
        batches.Split(static_cast<uint64_t>(t))
            .SampleWithoutReplacement(static_cast<int>(n),
                                      static_cast<int>(batch_size));
    const DualPoint here{x, eta};
    double g = 0;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    for (int i : batch) {
      const Sample& s = problem.data().sample(i);
      g += ClipScalar(problem.PerSampleEtaGrad(here, s, &clamps), config.c_eta);
      v += Clip(problem.PerSampleXGrad(here, s, &clamps), config.c_x);
    }
    g = g / static_cast<double>(batch.size()) +
        ScalarNoise(noise_eta.Split(static_cast<uint64_t>(t)), sigma_eta);
    v = v / static_cast<double>(batch.size()) +
        VectorNoise(noise_x.Split(static_cast<uint64_t>(t)), sigma_x, d);

    const double eta_next = eta - config.alpha * g;
    const Eigen::VectorXd x_next = x - config.beta * v;
    if (!x_next.allFinite() || !std::isfinite(eta_next) ||
        x_next.norm() > kDivergenceGuard) {
      trace.aborted = true;
      trace.abort_reason = "divergent iterate at t=" + std::to_string(t);
      break;
    }
    x = x_next;
    eta = eta_next;

    TraceRow row;
    row.t = t;
    row.est_norm_x = v.norm();
    row.est_norm_eta = std::abs(g);
    if (IsEvalStep(t, config.t, config.eval_every)) {
      row.true_grad_norm = problem.TrueGradientNorm(x);
    }
    row.objective = problem.FullObjective(DualPoint{x, eta});
    row.clamps = clamps.events;
    row.wall_ms = clock.ElapsedMs();
    trace.rows.push_back(std::move(row));

    if (t + 1 == tau) {
      trace.output_x = x;
      trace.output_scalar = eta;
    }
  }

  trace.final_x = x;
  trace.final_scalar = eta;
  trace.runtime_ms = clock.ElapsedMs();
  FinalizeTrace(trace);
  return trace;
}

DoubleSpiderConfig SuggestTheoreticalParams(const SmoothnessConstants& sc,
                                            long n, long d,
                                            const PrivacyBudget& budget,
                                            double psi0) {
  ValidateBudget(budget);
  if (n < 1 || d < 1) {
    throw std::invalid_argument("SuggestTheoreticalParams: n, d must be >= 1");
  }
  DoubleSpiderConfig cfg;
  cfg.constants = sc;
  cfg.budget = budget;
  cfg.alpha = 1.0 / (4.0 * sc.l2);
  cfg.beta = 0;  // adaptive rule

  const double c0 = std::max(32.0 * sc.l2, 8.0 * sc.l0);
  const double c2 = std::max(1.0 / (8.0 * sc.l2) + sc.l1 / std::pow(sc.l0, 3), 1.0);

  auto cap = [n](double value) {
    const double floored = std::floor(value);
    return static_cast<long>(std::min(std::max(floored, 1.0), double(n)));
  };

  long q;
  long t_total;
  if (budget.non_private()) {
    // Single epoch; q capped at T.
    t_total = std::max<long>(1, static_cast<long>(std::ceil(6.0 * n * c0 * psi0)));
    q = t_total;
  } else {
    const double q_raw =
        std::pow(n * budget.epsilon /
                     std::sqrt(d * std::log(1.0 / budget.delta)),
                 2.0 / 3.0);
    q = std::max<long>(1, static_cast<long>(std::floor(q_raw)));
    const double t_min = 6.0 * n * c0 * psi0;
    const long epochs =
        std::max<long>(1, static_cast<long>(std::ceil(t_min / double(q))));
    t_total = epochs * q;
  }
  cfg.q = q;
  cfg.t = t_total;

  cfg.n1 = cap(6.0 * sc.d2 * c0 * c2 /
               (budget.non_private() ? 1.0 : budget.epsilon * budget.epsilon));
  const double c1 = 4.0 + 8.0 * sc.l1 * sc.l1 * sc.d2 / (cfg.n1 * sc.l0 * sc.l0) +
                    32.0 * sc.l1 * sc.l1 * sc.d2 / (cfg.n1 * sc.l0 * sc.l0) +
                    16.0 * sc.l1 * sc.l1 * sc.l2 /
                        (5.0 * sc.d1 * std::pow(sc.l0, 3));
  cfg.n2 = cap(std::max({20.0 * q * sc.d1 * sc.l2 / sc.l0, 20.0 * q * c2 * sc.l2,
                         12.0 * q * sc.l1 * sc.l1 * c0 * c2 / (sc.l0 * sc.l0),
                         double(q)}));
  cfg.n3 = cap(std::max(200.0 * sc.d1 * sc.l2 / sc.l0,
                        3.0 * c0 * (sc.d0 + 4.0 * sc.d1 * sc.d2) * n /
                            (2.0 * sc.l0)));
  cfg.n4 = cap(std::max(5.0 * q * sc.l2 / sc.l0, 6.0 * q * c1 * c0 / sc.l0));
  return cfg;
}

}  // namespace drodp
