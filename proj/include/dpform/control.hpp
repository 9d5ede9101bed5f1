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

#ifndef DPFORM_CONTROL_HPP
#define DPFORM_CONTROL_HPP

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "dpform/graph.hpp"
#include "dpform/schedule.hpp"

namespace dpform {

// Per-agent LQ weights plus adjacency bound theta. Q and R are resolved to
// one matrix per agent before use (a single shared pair is broadcast).
struct ControlConfig {
  std::vector<Eigen::MatrixXd> Q;  // one per agent, SPD
  std::vector<Eigen::MatrixXd> R;  // one per agent, SPD
  int horizon_T = 0;               // LQ horizon, >= 2
  double theta = 0.0;              // adjacency bound, > 0

  void validate(int n_agents) const;
};

// Throws NotPositiveDefinite unless m is symmetric positive definite
// (eigenvalue tolerance 1e-12 relative).
void require_spd(const Eigen::MatrixXd& m, const char* name);

// First-input feedback gain K of the finite-horizon LQ tracking problem:
// integrator dynamics x+ = x + u, stage input weight R, stage state weight
// c_t * degree * Q toward the (frozen) neighbor-target mean, state costed at
// stages 0..T-1 with no terminal weight. The stage-0 state term does not
// depend on the input, so T = 1 would degenerate to a zero gain and is
// rejected (HorizonTooShort). The returned K satisfies
//   u*(0) = c_t * K * sum_j (y_j - x)
// over the degree-many targets y_j. Throws NotPositiveDefinite,
// HorizonTooShort, NonPositiveParameter.
Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                         double c_t, int degree, int T);

// u_i = c_t * K * sum_j (reception_j + d_j - x_i). The reception and offset
// maps must be keyed by the same neighbor set (NeighborMismatch otherwise).
Eigen::VectorXd control_input(const Eigen::MatrixXd& K, double c_t,
                              const std::map<int, Eigen::VectorXd>& receptions,
                              const std::map<int, Eigen::VectorXd>& d,
                              const Eigen::VectorXd& x_i);

// Gains precomputed for every (agent, t) over a simulation horizon. They
// depend only on deterministic data (c(t), Q_i, R_i, degree), so the whole
// table is built up front and never mutated afterwards.
class GainSchedule {
 public:
  static GainSchedule compute(const Graph& graph, const ControlConfig& config,
                              const Schedule& c, int horizon);

  // Throws GainMissing outside the precomputed range.
  const Eigen::MatrixXd& gain(int agent, int t) const;

  // rho_{K,t} = max_i ||K_{i,t}|| (spectral norm).
  double rho_at(int t) const;

  // gain_bound: max of rho_{K,t} over [t_begin, t_end]. Throws EmptyWindow.
  double rho_max(int t_begin, int t_end) const;

  int horizon() const { return horizon_; }
  int n_agents() const { return n_agents_; }

 private:
  int n_agents_ = 0;
  int horizon_ = 0;
  std::vector<Eigen::MatrixXd> gains_;  // [t * n_agents + agent]
  std::vector<double> rho_;             // [t]
};

}  // namespace dpform

#endif  // DPFORM_CONTROL_HPP
