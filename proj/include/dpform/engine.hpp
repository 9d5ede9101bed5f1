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

#ifndef DPFORM_ENGINE_HPP
#define DPFORM_ENGINE_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dpform/channel.hpp"
#include "dpform/control.hpp"
#include "dpform/graph.hpp"
#include "dpform/schedule.hpp"

namespace dpform {

// Desired relative states, one vector per canonical edge (a, b), a < b,
// meaning x_a - x_b should settle at d. The reverse direction is obtained
// by negation on lookup.
struct FormationSpec {
  std::vector<Eigen::VectorXd> d;

  void validate(const Graph& graph, int state_dim) const;

  // Offset d_{agent,other} for the edge between them (antisymmetry applied).
  Eigen::VectorXd offset(const Graph& graph, int agent, int other) const;
};

// How reception noise is produced.
//   kIndependent - one independent draw per directed link (the model).
//   kZero        - noise forced to zero (test hook).
//   kSharedEdge  - one draw per edge, applied with the incidence sign of
//                  the receiver and the lower endpoint's floor; reproduces
//                  the edge-stacked error dynamics exactly (test hook).
enum class NoiseMode { kIndependent, kZero, kSharedEdge };

// Everything a closed-loop run needs besides seeds and horizons.
struct Scenario {
  Graph graph;
  Eigen::MatrixXd x0;  // n_agents x state_dim
  FormationSpec formation;
  ChannelParams channel;
  ControlConfig control;
  Schedule c_schedule;
  NoiseMode noise = NoiseMode::kIndependent;

  int state_dim() const { return static_cast<int>(x0.cols()); }
  void validate() const;
};

struct SimState {
  int t = 0;
  Eigen::MatrixXd x;
};

// Per-step capture used by tests and the realized privacy audit.
struct StepTrace {
  struct Item {
    int edge = 0;
    int receiver = 0;
    Eigen::VectorXd noise;
    double variance = 0.0;
  };
  std::vector<Item> receptions;
  double min_variance = 0.0;
};

// Stacked edge error xi = [x_a - x_b - d_e]_e in canonical edge order.
Eigen::VectorXd edge_errors(const Eigen::MatrixXd& x, const Graph& graph,
                            const FormationSpec& formation);

// Psi = (B kron I_n) K (B^T kron I_n) for block-diagonal agent gains;
// diagnostic companion of the stacked error dynamics.
Eigen::MatrixXd psi_matrix(const Graph& graph,
                           const std::vector<Eigen::MatrixXd>& gain_blocks);

// One synchronous closed-loop step: every agent samples its receptions from
// the time-t states, computes its input, and all states update together.
void step(SimState& state, const Scenario& scenario, const GainSchedule& gains,
          std::uint64_t seed, std::uint32_t run_index,
          StepTrace* trace = nullptr);

struct TrajectoryLog {
  std::vector<Eigen::MatrixXd> x;       // horizon + 1 snapshots
  std::vector<Eigen::VectorXd> xi;      // stacked edge errors per snapshot
  std::vector<double> xi_sq;            // ||xi||^2 per snapshot
  std::vector<double> min_link_variance;  // per executed step, length horizon
};

TrajectoryLog run(const Scenario& scenario, const GainSchedule& gains,
                  std::uint64_t seed, int horizon, std::uint32_t run_index = 0);

// Convenience overload that precomputes the gain table.
TrajectoryLog run(const Scenario& scenario, std::uint64_t seed, int horizon);

struct MCStats {
  int runs = 0;
  std::vector<double> mean_sq;      // (1/runs) sum_r ||xi_r(t)||^2
  Eigen::VectorXd mean_xi_final;    // componentwise mean of xi(horizon)
  Eigen::VectorXd var_xi_final;     // componentwise sample variance
  std::vector<Eigen::VectorXd> final_xi;  // per run
};

enum class Exec { kSerial, kOpenMP };

// Independent runs r = 0..n_runs-1 under substream (base_seed, r). Results
// are identical for both execution policies and any thread count.
MCStats monte_carlo(const Scenario& scenario, const GainSchedule& gains,
                    int n_runs, int horizon, std::uint64_t base_seed,
                    Exec exec = Exec::kOpenMP);

}  // namespace dpform

#endif  // DPFORM_ENGINE_HPP
