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

#ifndef DRODP_DIVERGENCE_H_
#define DRODP_DIVERGENCE_H_

#include <string>

#include <Eigen/Core>

namespace drodp {

enum class DivergenceKind { kChiSquare, kKlRegCvar, kCressieRead, kKl };

// A psi-divergence family member: the generator psi (extended-real, +inf
// outside its domain), its convex conjugate psi*, the conjugate derivative,
// a smoothness constant M for (psi*)'' on the working range [-S0, S0], and
// the working-range bound S0 itself.
//
// Closed forms:
//   chi-square:   psi(a) = (a-1)^2,  psi*(t) = -1 + (t+2)^2/4    (t >= -2)
//   KL:           psi(a) = a log a - a + 1,  psi*(t) = e^t - 1
//   KL-reg CVaR:  psi = KL restricted to [0, 1/alpha);
//                 psi*(t) = e^t - 1 for t <= log(1/alpha),
//                           (1 + t + log alpha)/alpha - 1 above
//                 (the two branches are tangent at the switch)
//   Cressie-Read: psi(a) = (a^k - ak + k - 1)/(k(k-1)),
//                 psi*(t) = (((k-1)t + 1)_+^{k/(k-1)} - 1)/k
//
// The stored chi-square generator is (a-1)^2 rather than the more common
// (a-1)^2/2: it is the function whose conjugate over a >= 0 equals the
// psi* the optimizers consume, keeping psi and psi* an actual conjugate
// pair. Likewise the KL-reg-CVaR conjugate is stored in its piecewise form;
// the min of the two branches is the linear one everywhere (it is the
// tangent of e^t at the switch) and is not the conjugate of the stated psi.
class Divergence {
 public:
  static Divergence ChiSquare(double s0 = 5.0);
  static Divergence Kl(double s0 = 5.0);
  static Divergence KlRegCvar(double alpha, double s0 = 5.0);
  static Divergence CressieRead(double k, double s0 = 5.0);

  // "chi2" | "kl" | "klcvar:<alpha>" | "cressie:<k>"
  static Divergence Parse(const std::string& spec);
  std::string ToString() const;

  // Extended real; +inf encodes out-of-domain (always for a < 0).
  double Psi(double a) const;

  double PsiStar(double t) const;

  // Left derivative at kink points.
  double PsiStarPrime(double t) const;

  DivergenceKind kind() const { return kind_; }
  double smooth_m() const { return smooth_m_; }
  double domain_bound_s0() const { return s0_; }
  double alpha() const { return alpha_; }
  double cressie_k() const { return cressie_k_; }

  // Largest lower bound of the set where psi* agrees with the conjugate of
  // psi (chi-square: -2, the table's parabola without truncation; -inf for
  // the other kinds).
  double conjugate_domain_lo() const;

 private:
  Divergence(DivergenceKind kind, double alpha, double k, double s0);

  DivergenceKind kind_;
  double alpha_ = 0.0;      // KL-reg CVaR only
  double cressie_k_ = 0.0;  // Cressie-Read only
  double s0_;
  double smooth_m_;
};

// Brute-force conjugate sup_{a in grid} { t*a - psi(a) }. Test oracle only;
// never called by the optimizers.
struct ConjugateGridResult {
  double value;
  double argmax;
  bool at_grid_edge;  // maximizer hit the grid boundary; value is suspect
};

ConjugateGridResult ConjugateOracle(const Divergence& div, double t,
                                    double grid_lo = 0.0,
                                    double grid_hi = 50.0,
                                    int grid_n = 100000);

}  // namespace drodp

#endif  // DRODP_DIVERGENCE_H_
