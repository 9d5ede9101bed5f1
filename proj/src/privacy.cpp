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

#include "dpform/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "dpform/errors.hpp"

namespace dpform::privacy {

namespace {

constexpr double kBracketHigh = 40.0;

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// log Q(x) for large x from the classic tail expansion
// Q(x) = phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8 - ...).
double log_q_tail_asymptotic(double x) {
  const double inv_sq = 1.0 / (x * x);
  const double series =
      1.0 + inv_sq * (-1.0 + inv_sq * (3.0 + inv_sq * (-15.0 + inv_sq * 105.0)));
  return -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(series);
}

// Sums with Neumaier compensation; deterministic for a fixed order.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace

double q_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_tail_inv(double p) {
  if (!(p > 0.0) || !(p < 0.5)) {
    throw OutOfDomain("q_tail_inv requires p in (0, 1/2)");
  }
  double lo = 0.0;
  double hi = kBracketHigh;
  // Good start everywhere on (0, 1/2); slightly above the root near 1/2.
  double x = std::min(std::sqrt(-2.0 * std::log(p)), hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double q = q_tail(x);
    const double err = q - p;
    if (std::abs(err) <= 1e-14 * p) break;
    if (err > 0.0) {
      lo = x;  // q decreasing: root is to the right
    } else {
      hi = x;
    }
    const double deriv = std_normal_pdf(x);
    double next = x + err / deriv;  // Newton on Q(x) - p, Q' = -phi
    if (!(next > lo) || !(next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (next == x) break;
    x = next;
  }
  return x;
}

double q_tail_inv_from_log(double log_p) {
  if (!(log_p < -std::numbers::ln2)) {
    throw OutOfDomain("q_tail_inv_from_log requires log(p) < log(1/2)");
  }
  if (log_p > std::log(1e-290)) {
    return q_tail_inv(std::exp(log_p));
  }
  // Newton on log Q(x) = log_p with the asymptotic tail expansion;
  // d/dx log Q = -phi/Q ~ -(x + 1/x) in this regime.
  double x = std::sqrt(-2.0 * log_p);
  for (int iter = 0; iter < 60; ++iter) {
    const double err = log_q_tail_asymptotic(x) - log_p;
    const double step = err / (x + 1.0 / x);
    x += step;
    if (std::abs(step) <= 1e-13 * x) break;
  }
  return x;
}

double gaussian_sigma_for(double delta2, double eps, double delta) {
  if (delta2 < 0.0) throw OutOfDomain("sensitivity must be >= 0");
  if (!(eps > 0.0)) throw OutOfDomain("eps must be > 0");
  if (!(delta > 0.0) || !(delta < 0.5)) {
    throw OutOfDomain("delta must lie in (0, 1/2)");
  }
  if (delta2 == 0.0) return 0.0;
  const double q = q_tail_inv(delta);
  // 1/(sqrt(q^2+2eps) - q) == (sqrt(q^2+2eps) + q) / (2 eps)
  return delta2 * (std::sqrt(q * q + 2.0 * eps) + q) / (2.0 * eps);
}

double step_sensitivity(double c_t, double rho_K_t, double theta) {
  if (!(c_t > 0.0)) throw NonPositiveParameter("c_t must be > 0");
  if (rho_K_t < 0.0 || theta < 0.0) {
    throw NonPositiveParameter("rho_K and theta must be >= 0");
  }
  return 2.0 * c_t * rho_K_t * theta;
}

double step_epsilon(double delta_sens, double variance_floor, double delta_t) {
  if (delta_sens < 0.0) throw OutOfDomain("sensitivity must be >= 0");
  if (!(variance_floor > 0.0)) {
    throw OutOfDomain("variance floor must be > 0");
  }
  if (!(delta_t > 0.0) || !(delta_t < 0.5)) {
    throw OutOfDomain("delta_t must lie in (0, 1/2)");
  }
  if (delta_sens == 0.0) return 0.0;
  return delta_sens * delta_sens / (2.0 * variance_floor) +
         delta_sens / std::sqrt(variance_floor) * q_tail_inv(delta_t);
}

std::pair<double, double> PrivacyLedger::compose(int t1, int t2) const {
  if (t1 > t2 || t1 < t_begin || t2 > t_end) {
    throw MissingRecords("ledger covers [" + std::to_string(t_begin) + "," +
                         std::to_string(t_end) + "], requested [" +
                         std::to_string(t1) + "," + std::to_string(t2) + "]");
  }
  CompensatedSum eps, delta;
  for (const auto& rec : records) {
    if (rec.t >= t1 && rec.t <= t2) {
      eps.add(rec.eps);
      delta.add(rec.delta);
    }
  }
  return {eps.value(), delta.value()};
}

namespace {

PrivacyLedger build_ledger_impl(const GainSchedule& gains, const Schedule& c,
                                const Schedule& delta,
                                const std::vector<double>* variance_by_t,
                                double r_floor, double theta, int t_begin,
                                int t_end, RhoMode rho_mode) {
  if (t_begin < 0 || t_begin > t_end) {
    throw EmptyWindow("audit window [" + std::to_string(t_begin) + "," +
                      std::to_string(t_end) + "] is empty");
  }
  if (!(theta > 0.0)) throw NonPositiveParameter("theta must be > 0");
  PrivacyLedger ledger;
  ledger.t_begin = t_begin;
  ledger.t_end = t_end;
  ledger.r_floor = r_floor;
  ledger.theta = theta;
  ledger.rho_mode = rho_mode;
  ledger.variance_mode =
      variance_by_t ? VarianceMode::kRealized : VarianceMode::kFloor;
  const double rho_global =
      rho_mode == RhoMode::kGlobal ? gains.rho_max(t_begin, t_end) : 0.0;
  ledger.records.reserve(t_end - t_begin + 1);
  for (int t = t_begin; t <= t_end; ++t) {
    StepRecord rec;
    rec.t = t;
    const double rho =
        rho_mode == RhoMode::kGlobal ? rho_global : gains.rho_at(t);
    rec.delta_sens = step_sensitivity(c(t), rho, theta);
    rec.delta = delta(t);
    double variance = r_floor;
    if (variance_by_t) {
      if (t >= static_cast<int>(variance_by_t->size())) {
        throw MissingRecords("no realized variance for t=" +
                             std::to_string(t));
      }
      variance = (*variance_by_t)[t];
    }
    rec.eps = step_epsilon(rec.delta_sens, variance, rec.delta);
    ledger.records.push_back(rec);
  }
  return ledger;
}

}  // namespace

PrivacyLedger build_ledger(const GainSchedule& gains, const Schedule& c,
                           const Schedule& delta, double r_floor, double theta,
                           int t_begin, int t_end, RhoMode rho_mode) {
  if (!(r_floor > 0.0)) throw NonPositiveParameter("r_floor must be > 0");
  return build_ledger_impl(gains, c, delta, nullptr, r_floor, theta, t_begin,
                           t_end, rho_mode);
}

PrivacyLedger build_realized_ledger(const GainSchedule& gains,
                                    const Schedule& c, const Schedule& delta,
                                    const std::vector<double>& variance_by_t,
                                    double theta, int t_begin, int t_end,
                                    RhoMode rho_mode) {
  return build_ledger_impl(gains, c, delta, &variance_by_t, 0.0, theta,
                           t_begin, t_end, rho_mode);
}

namespace {

double schedule_log_value(const Schedule& s, long t) {
  switch (s.family) {
    case ScheduleFamily::kPower:
      return std::log(s.a) - s.p * std::log(static_cast<double>(t) + 1.0);
    case ScheduleFamily::kExpSqrt:
      return std::log(s.b) - std::sqrt(static_cast<double>(t));
    case ScheduleFamily::kConstant:
      return std::log(s.value);
    case ScheduleFamily::kTable:
      return std::log(s.table.at(static_cast<std::size_t>(t)));
  }
  throw OutOfDomain("unreachable schedule family");
}

void analytic_c_membership(const Schedule& c, AdmissibilityReport& report,
                           std::ostringstream& why) {
  switch (c.family) {
    case ScheduleFamily::kPower:
      report.c_positive = true;
      report.c_l2 = c.p > 0.5;
      report.c_l1 = c.p > 1.0;
      why << "c(t)=" << c.describe() << ": l2 iff p>1/2 ("
          << (report.c_l2 ? "yes" : "no") << "), l1 iff p>1 ("
          << (report.c_l1 ? "yes" : "no") << "). ";
      break;
    case ScheduleFamily::kExpSqrt:
      report.c_positive = true;
      report.c_l2 = true;
      report.c_l1 = true;
      why << "c(t)=" << c.describe() << ": sub-exponential decay, l1 and l2. ";
      break;
    case ScheduleFamily::kConstant:
      report.c_positive = true;
      report.c_l2 = false;
      report.c_l1 = false;
      why << "constant c(t) is not square-summable. ";
      break;
    case ScheduleFamily::kTable:
      throw UnknownFamily("analytic admissibility needs a closed-form c(t)");
  }
}

void analytic_delta_membership(const Schedule& d, AdmissibilityReport& report,
                               std::ostringstream& why) {
  report.delta_domain = d(0) > 0.0 && d(0) < 0.5;
  switch (d.family) {
    case ScheduleFamily::kExpSqrt:
      report.delta_l1 = true;
      why << "delta_t=" << d.describe() << ": sum b e^(-sqrt t) < inf. ";
      break;
    case ScheduleFamily::kPower:
      report.delta_l1 = d.p > 1.0;
      why << "delta_t=" << d.describe() << ": l1 iff p>1 ("
          << (report.delta_l1 ? "yes" : "no") << "). ";
      break;
    case ScheduleFamily::kConstant:
      report.delta_l1 = false;
      why << "constant delta_t is not summable. ";
      break;
    case ScheduleFamily::kTable:
      throw UnknownFamily(
          "analytic admissibility needs a closed-form delta_t");
  }
}

// Growth order of Qinv(delta_t): exp_sqrt gives Theta(t^(1/4)); power decay
// gives Theta(sqrt(log t)); constant stays bounded.
void analytic_cross_membership(const Schedule& c, const Schedule& d,
                               AdmissibilityReport& report,
                               std::ostringstream& why) {
  if (c.family == ScheduleFamily::kExpSqrt) {
    report.cross_l1 = true;
    why << "cross term: e^(-sqrt t) beats any polynomial Qinv growth. ";
    return;
  }
  if (c.family == ScheduleFamily::kConstant) {
    report.cross_l1 = false;
    why << "cross term: constant c(t) cannot give a summable series. ";
    return;
  }
  // c is a power family here.
  switch (d.family) {
    case ScheduleFamily::kExpSqrt:
      report.cross_l1 = c.p > 1.25;
      why << "cross term: Qinv(delta_t)=Theta(t^(1/4)) so c(t)Qinv(delta_t)"
             "~t^(1/4-p), l1 iff p>5/4 ("
          << (report.cross_l1 ? "yes" : "no") << "). ";
      break;
    case ScheduleFamily::kPower:
      report.cross_l1 = c.p > 1.0;
      why << "cross term: Qinv(delta_t)=Theta(sqrt(log t)), l1 iff p>1 ("
          << (report.cross_l1 ? "yes" : "no") << "). ";
      break;
    case ScheduleFamily::kConstant:
      report.cross_l1 = c.p > 1.0;
      why << "cross term: bounded Qinv, l1 iff p>1 ("
          << (report.cross_l1 ? "yes" : "no") << "). ";
      break;
    case ScheduleFamily::kTable:
      throw UnknownFamily(
          "analytic admissibility needs a closed-form delta_t");
  }
}

SeriesDiagnostic partial_sum_series(const std::string& name,
                                    const std::vector<long>& horizons,
                                    const std::function<double(long)>& term) {
  SeriesDiagnostic diag;
  diag.name = name;
  diag.horizons = horizons;
  CompensatedSum sum;
  long t = 0;
  for (long h : horizons) {
    for (; t < h; ++t) sum.add(term(t));
    diag.partial_sums.push_back(sum.value());
  }
  const std::size_t n = diag.partial_sums.size();
  if (n >= 2) {
    const double total = diag.partial_sums[n - 1];
    const double increment = total - diag.partial_sums[n - 2];
    diag.last_increment_ratio =
        std::abs(increment) / std::max(std::abs(total), 1e-300);
    diag.appears_convergent = diag.last_increment_ratio < 0.01;
  }
  return diag;
}

}  // namespace

AdmissibilityReport validate_schedules(const Schedule& c,
                                       const Schedule& delta,
                                       ValidateMode mode) {
  AdmissibilityReport report;
  report.mode = mode;
  if (mode == ValidateMode::kAnalytic) {
    std::ostringstream why;
    analytic_c_membership(c, report, why);
    analytic_delta_membership(delta, report, why);
    analytic_cross_membership(c, delta, report, why);
    report.c_l2_not_l1 = report.c_l2 && !report.c_l1;
    report.admissible = report.c_positive && report.c_l2 && report.delta_l1 &&
                        report.cross_l1 && report.delta_domain;
    why << (report.admissible ? "All conditions hold."
                              : "At least one condition fails.");
    report.rationale = why.str();
    return report;
  }

  // Partial-sum diagnostics. Table schedules are only evaluable up to their
  // length; horizons are truncated accordingly.
  std::vector<long> horizons = {1000L, 10000L, 100000L, 1000000L};
  long max_t = horizons.back();
  if (c.family == ScheduleFamily::kTable) {
    max_t = std::min<long>(max_t, static_cast<long>(c.table.size()));
  }
  if (delta.family == ScheduleFamily::kTable) {
    max_t = std::min<long>(max_t, static_cast<long>(delta.table.size()));
  }
  std::vector<long> usable;
  for (long h : horizons) {
    if (h <= max_t) usable.push_back(h);
  }
  if (usable.empty() || usable.back() != max_t) usable.push_back(max_t);

  const auto c_at = [&c](long t) { return c(static_cast<int>(t)); };
  report.diagnostics.push_back(partial_sum_series(
      "sum_c", usable, [&](long t) { return c_at(t); }));
  report.diagnostics.push_back(partial_sum_series(
      "sum_c_sq", usable, [&](long t) { return c_at(t) * c_at(t); }));
  report.diagnostics.push_back(partial_sum_series(
      "sum_delta", usable,
      [&](long t) { return std::exp(schedule_log_value(delta, t)); }));
  report.diagnostics.push_back(partial_sum_series(
      "sum_c_qinv_delta", usable, [&](long t) {
        const double log_d = schedule_log_value(delta, t);
        if (log_d >= -std::numbers::ln2) {
          throw OutOfDomain("delta_t must stay below 1/2, fails at t=" +
                            std::to_string(t));
        }
        return c_at(t) * q_tail_inv_from_log(log_d);
      }));

  report.c_positive = true;  // families are positive by construction
  report.delta_domain = delta(0) > 0.0 && delta(0) < 0.5;
  report.c_l2 = report.diagnostics[1].appears_convergent;
  report.c_l1 = report.diagnostics[0].appears_convergent;
  report.delta_l1 = report.diagnostics[2].appears_convergent;
  report.cross_l1 = report.diagnostics[3].appears_convergent;
  report.c_l2_not_l1 = report.c_l2 && !report.c_l1;
  report.admissible = report.c_positive && report.c_l2 && report.delta_l1 &&
                      report.cross_l1 && report.delta_domain;
  report.rationale =
      "Cauchy-tail heuristic on partial sums; diagnostic only, slow tails "
      "may be misjudged.";
  return report;
}

}  // namespace dpform::privacy
