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

#include "drodp/divergence.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "drodp/textio.h"

namespace drodp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckFinite(double t) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument("Divergence: non-finite conjugate argument");
  }
}

}  // namespace

Divergence::Divergence(DivergenceKind kind, double alpha, double k, double s0)
    : kind_(kind), alpha_(alpha), cressie_k_(k), s0_(s0) {
  if (!(s0 > 0)) throw std::invalid_argument("Divergence: S0 must be positive");
  switch (kind_) {
    case DivergenceKind::kChiSquare:
      smooth_m_ = 0.5;
      break;
    case DivergenceKind::kKl:
      // e^t - 1 is not globally M-smooth; M is its curvature bound over the
      // working range [-S0, S0].
      smooth_m_ = std::exp(s0_);
      break;
    case DivergenceKind::kKlRegCvar:
      if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("Divergence: alpha must be in (0, 1)");
      }
      // (psi*)'' = e^t below the switch, 0 above; the switch is at
      // log(1/alpha), so the global bound is 1/alpha.
      smooth_m_ = 1.0 / alpha;
      break;
    case DivergenceKind::kCressieRead: {
      if (k == 0.0 || k == 1.0) {
        throw std::invalid_argument("Divergence: Cressie-Read k must avoid {0, 1}");
      }
      // (psi*)''(t) = u^{(2-k)/(k-1)} with u = (k-1)t + 1 (zero where
      // u <= 0); curvature bound over [-S0, S0] intersected with u > 0.
      const double e2 = (2.0 - k) / (k - 1.0);
      const double u_lo = (k - 1.0) * -s0_ + 1.0;
      const double u_hi = (k - 1.0) * s0_ + 1.0;
      if (k == 2.0) {
        smooth_m_ = 1.0;
      } else if (e2 > 0.0) {
        smooth_m_ = std::pow(std::max(u_lo, u_hi), e2);
      } else {
        // Curvature diverges as u -> 0+; finite only when the kink lies
        // outside the working range.
        const double u_min = std::min(u_lo, u_hi);
        smooth_m_ = u_min > 0.0 ? std::pow(u_min, e2) : kInf;
      }
      break;
    }
  }
}

Divergence Divergence::ChiSquare(double s0) {
  return Divergence(DivergenceKind::kChiSquare, 0.0, 0.0, s0);
}

Divergence Divergence::Kl(double s0) {
  return Divergence(DivergenceKind::kKl, 0.0, 0.0, s0);
}

Divergence Divergence::KlRegCvar(double alpha, double s0) {
  return Divergence(DivergenceKind::kKlRegCvar, alpha, 0.0, s0);
}

Divergence Divergence::CressieRead(double k, double s0) {
  return Divergence(DivergenceKind::kCressieRead, 0.0, k, s0);
}

Divergence Divergence::Parse(const std::string& spec) {
  if (spec == "chi2") return ChiSquare();
  if (spec == "kl") return Kl();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const double value = ParseDouble(spec.substr(colon + 1));
    if (head == "klcvar") return KlRegCvar(value);
    if (head == "cressie") return CressieRead(value);
  }
  throw std::invalid_argument("unknown divergence: " + spec);
}

std::string Divergence::ToString() const {
  switch (kind_) {
    case DivergenceKind::kChiSquare:
      return "chi2";
    case DivergenceKind::kKl:
      return "kl";
    case DivergenceKind::kKlRegCvar:
      return "klcvar:" + FormatDouble(alpha_);
    case DivergenceKind::kCressieRead:
      return "cressie:" + FormatDouble(cressie_k_);
  }
  return "?";
}

double Divergence::Psi(double a) const {
  if (a < 0.0) return kInf;
  switch (kind_) {
    case DivergenceKind::kChiSquare:
      return (a - 1.0) * (a - 1.0);
    case DivergenceKind::kKl:
      return a == 0.0 ? 1.0 : a * std::log(a) - a + 1.0;
    case DivergenceKind::kKlRegCvar:
      if (a >= 1.0 / alpha_) return kInf;
      return a == 0.0 ? 1.0 : a * std::log(a) - a + 1.0;
    case DivergenceKind::kCressieRead: {
      const double k = cressie_k_;
      if (a == 0.0) {
        // a^k -> +inf for k < 0, 0 otherwise.
        if (k < 0.0) return kInf;
        return (k - 1.0) / (k * (k - 1.0));
      }
      return (std::pow(a, k) - a * k + k - 1.0) / (k * (k - 1.0));
    }
  }
  return kInf;
}

double Divergence::PsiStar(double t) const {
  CheckFinite(t);
  switch (kind_) {
    case DivergenceKind::kChiSquare:
      return -1.0 + (t + 2.0) * (t + 2.0) / 4.0;
    case DivergenceKind::kKl:
      return std::expm1(t);
    case DivergenceKind::kKlRegCvar: {
      const double t_switch = -std::log(alpha_);
      if (t <= t_switch) return std::expm1(t);
      return (1.0 + t + std::log(alpha_)) / alpha_ - 1.0;
    }
    case DivergenceKind::kCressieRead: {
      const double k = cressie_k_;
      const double u = (k - 1.0) * t + 1.0;
      const double p = k / (k - 1.0);
      if (u <= 0.0) return p > 0.0 ? -1.0 / k : kInf;
      return (std::pow(u, p) - 1.0) / k;
    }
  }
  return kInf;
}

double Divergence::PsiStarPrime(double t) const {
  CheckFinite(t);
  switch (kind_) {
    case DivergenceKind::kChiSquare:
      return (t + 2.0) / 2.0;
    case DivergenceKind::kKl:
      return std::exp(t);
    case DivergenceKind::kKlRegCvar: {
      const double t_switch = -std::log(alpha_);
      if (t <= t_switch) return std::exp(t);
      return 1.0 / alpha_;
    }
    case DivergenceKind::kCressieRead: {
      const double k = cressie_k_;
      const double u = (k - 1.0) * t + 1.0;
      if (u <= 0.0) return 0.0;  // truncation region; left derivative at the kink
      return std::pow(u, 1.0 / (k - 1.0));
    }
  }
  return 0.0;
}

double Divergence::conjugate_domain_lo() const {
  return kind_ == DivergenceKind::kChiSquare ? -2.0 : -kInf;
}

ConjugateGridResult ConjugateOracle(const Divergence& div, double t,
                                    double grid_lo, double grid_hi,
                                    int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("ConjugateOracle: grid_n too small");
  double best = -kInf;
  double best_a = grid_lo;
  int best_i = 0;
  const double step = (grid_hi - grid_lo) / (grid_n - 1);
  for (int i = 0; i < grid_n; ++i) {
    const double a = grid_lo + step * i;
    const double psi = div.Psi(a);
    if (!std::isfinite(psi)) continue;
    const double value = t * a - psi;
    if (value > best) {
      best = value;
      best_a = a;
      best_i = i;
    }
  }
  return {best, best_a, best_i == 0 || best_i == grid_n - 1};
}

}  // namespace drodp
