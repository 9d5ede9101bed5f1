// Copyright 2026 The dpform Authors
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

#ifndef DPFORM_PRIVACY_HPP
#define DPFORM_PRIVACY_HPP

#include <string>
#include <utility>
#include <vector>

#include "dpform/control.hpp"
#include "dpform/schedule.hpp"

namespace dpform::privacy {

// Upper tail of the standard Gaussian, Q(x) = erfc(x / sqrt(2)) / 2.
double q_tail(double x);

// Inverse of q_tail on (0, 1/2): bracketed Newton on [0, 40], accurate to
// |q_tail(x) - p| <= 1e-12 * p. Throws OutOfDomain.
double q_tail_inv(double p);

// Inverse from log(p); falls back to an asymptotic expansion of log Q when
// p underflows a double. Used by partial-sum schedule diagnostics.
double q_tail_inv_from_log(double log_p);

// Minimal noise scale of the Gaussian mechanism for sensitivity delta2:
// sigma = delta2 / (sqrt(Qinv(delta)^2 + 2 eps) - Qinv(delta)), evaluated in
// the cancellation-free conjugate form. delta2 = 0 yields 0.
// Throws OutOfDomain for eps <= 0 or delta outside (0, 1/2).
double gaussian_sigma_for(double delta2, double eps, double delta);

// Per-step l2-sensitivity: 2 * c_t * rho_K_t * theta.
// Throws NonPositiveParameter for c_t <= 0 or negative rho/theta.
double step_sensitivity(double c_t, double rho_K_t, double theta);

// Per-step budget on the worst-case variance floor: with noise variance v,
// eps_t = Delta^2 / (2 v) + (Delta / sqrt(v)) * Qinv(delta_t). The
// state-dependent variance component only increases the noise, so dropping
// it is conservative. Throws OutOfDomain.
double step_epsilon(double delta_sens, double variance_floor, double delta_t);

struct StepRecord {
  int t = 0;
  double delta_sens = 0.0;
  double eps = 0.0;
  double delta = 0.0;
};

enum class RhoMode { kPerTime, kGlobal };
enum class VarianceMode { kFloor, kRealized };

// Per-step (Delta_t, eps_t, delta_t) records plus composed totals over an
// attack window. Records are deterministic given schedules and gains.
struct PrivacyLedger {
  std::vector<StepRecord> records;  // ascending t over [t_begin, t_end]
  int t_begin = 0;
  int t_end = -1;
  double r_floor = 0.0;
  double theta = 0.0;
  RhoMode rho_mode = RhoMode::kPerTime;
  VarianceMode variance_mode = VarianceMode::kFloor;

  // Adaptive sequential composition: (sum eps_t, sum delta_t) over
  // [t1, t2]. Throws MissingRecords when the window is not covered.
  std::pair<double, double> compose(int t1, int t2) const;
};

// Ledger against the receiver noise floor r_floor (the trajectory-free
// guarantee). Gains must cover [0, t_end].
PrivacyLedger build_ledger(const GainSchedule& gains, const Schedule& c,
                           const Schedule& delta, double r_floor, double theta,
                           int t_begin, int t_end,
                           RhoMode rho_mode = RhoMode::kPerTime);

// Ledger against realized per-step variances (worst directed link of a
// simulated trajectory). Strictly a post-hoc audit of one trajectory, not
// the worst-case guarantee. variance_by_t is indexed from t = 0.
PrivacyLedger build_realized_ledger(const GainSchedule& gains,
                                    const Schedule& c, const Schedule& delta,
                                    const std::vector<double>& variance_by_t,
                                    double theta, int t_begin, int t_end,
                                    RhoMode rho_mode = RhoMode::kPerTime);

enum class ValidateMode { kAnalytic, kPartialSum };

struct SeriesDiagnostic {
  std::string name;
  std::vector<long> horizons;
  std::vector<double> partial_sums;
  double last_increment_ratio = 0.0;
  bool appears_convergent = false;
};

struct AdmissibilityReport {
  ValidateMode mode = ValidateMode::kAnalytic;
  bool c_positive = false;
  bool c_l2 = false;
  bool c_l1 = false;
  bool delta_l1 = false;
  bool cross_l1 = false;
  bool delta_domain = false;  // delta_t in (0, 1/2), checked at t = 0
  bool admissible = false;
  bool c_l2_not_l1 = false;  // square-summable but not summable step sizes
  std::string rationale;
  std::vector<SeriesDiagnostic> diagnostics;  // partial-sum mode only
};

// Analytic mode decides membership by closed-form family tests and throws
// UnknownFamily for table schedules. Partial-sum mode reports partial sums
// at horizons 10^3..10^6 with a Cauchy-tail heuristic; it is a diagnostic,
// not a proof.
AdmissibilityReport validate_schedules(const Schedule& c,
                                       const Schedule& delta,
                                       ValidateMode mode);

}  // namespace dpform::privacy

#endif  // DPFORM_PRIVACY_HPP
