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

#include "dpform/engine.hpp"

#include <limits>
#include <string>

#include "dpform/errors.hpp"

namespace dpform {

void FormationSpec::validate(const Graph& graph, int state_dim) const {
  if (static_cast<int>(d.size()) != graph.n_edges()) {
    throw DimensionMismatch("formation has " + std::to_string(d.size()) +
                            " offsets for " + std::to_string(graph.n_edges()) +
                            " edges");
  }
  for (const auto& v : d) {
    if (v.size() != state_dim) {
      throw DimensionMismatch("formation offset dimension " +
                              std::to_string(v.size()) + " != state dim " +
                              std::to_string(state_dim));
    }
  }
}

Eigen::VectorXd FormationSpec::offset(const Graph& graph, int agent,
                                      int other) const {
  const int e = graph.edge_index(agent, other);
  // d stores the lower->higher orientation; d_{agent,other} has x_agent -
  // x_other settling at the offset, so the higher endpoint sees the negation.
  return agent < other ? d[e] : Eigen::VectorXd(-d[e]);
}

void Scenario::validate() const {
  if (x0.rows() != graph.n_agents() || x0.cols() < 1) {
    throw DimensionMismatch("initial states must be n_agents x state_dim");
  }
  if (!x0.allFinite()) {
    throw ValidationError("initial states must be finite");
  }
  formation.validate(graph, state_dim());
  channel.validate(graph.n_agents(), graph.n_edges());
  control.validate(graph.n_agents());
  for (int i = 0; i < graph.n_agents(); ++i) {
    if (control.Q[i].rows() != state_dim()) {
      throw DimensionMismatch("control weights must match the state dim");
    }
  }
}

Eigen::VectorXd edge_errors(const Eigen::MatrixXd& x, const Graph& graph,
                            const FormationSpec& formation) {
  const int n = static_cast<int>(x.cols());
  if (x.rows() != graph.n_agents()) {
    throw DimensionMismatch("state array must have one row per agent");
  }
  formation.validate(graph, n);
  Eigen::VectorXd xi(static_cast<Eigen::Index>(graph.n_edges()) * n);
  for (int e = 0; e < graph.n_edges(); ++e) {
    const auto& edge = graph.edges()[e];
    xi.segment(static_cast<Eigen::Index>(e) * n, n) =
        x.row(edge.a).transpose() - x.row(edge.b).transpose() -
        formation.d[e];
  }
  return xi;
}

Eigen::MatrixXd psi_matrix(const Graph& graph,
                           const std::vector<Eigen::MatrixXd>& gain_blocks) {
  if (static_cast<int>(gain_blocks.size()) != graph.n_agents()) {
    throw DimensionMismatch("one gain block per agent required");
  }
  const int n = static_cast<int>(gain_blocks.front().rows());
  const int m = graph.n_edges();
  const auto& b = graph.incidence();
  Eigen::MatrixXd psi =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m) * n,
                            static_cast<Eigen::Index>(m) * n);
  for (int e = 0; e < m; ++e) {
    for (int f = 0; f < m; ++f) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < graph.n_agents(); ++i) {
        const int weight = b(e, i) * b(f, i);
        if (weight != 0) block += weight * gain_blocks[i];
      }
      psi.block(static_cast<Eigen::Index>(e) * n,
                static_cast<Eigen::Index>(f) * n, n, n) = block;
    }
  }
  return psi;
}

namespace {

// Directed link stream ids: edge e spends streams 2e (lower endpoint
// receives) and 2e+1 (higher endpoint receives). The shared-edge hook reads
// stream 2e for both directions so one realization serves the whole edge.
std::uint32_t stream_id(int edge, bool receiver_is_lower, NoiseMode mode) {
  if (mode == NoiseMode::kSharedEdge) {
    return 2 * static_cast<std::uint32_t>(edge);
  }
  return 2 * static_cast<std::uint32_t>(edge) + (receiver_is_lower ? 0 : 1);
}

}  // namespace

void step(SimState& state, const Scenario& scenario, const GainSchedule& gains,
          std::uint64_t seed, std::uint32_t run_index, StepTrace* trace) {
  const Graph& graph = scenario.graph;
  const int n = scenario.state_dim();
  if (state.x.rows() != graph.n_agents() || state.x.cols() != n) {
    throw DimensionMismatch("state has wrong shape");
  }
  const double c_t = scenario.c_schedule(state.t);
  if (trace) {
    trace->receptions.clear();
    trace->min_variance = std::numeric_limits<double>::infinity();
  }
  double min_variance = std::numeric_limits<double>::infinity();

  Eigen::MatrixXd inputs = Eigen::MatrixXd::Zero(graph.n_agents(), n);
  for (int i = 0; i < graph.n_agents(); ++i) {
    if (graph.degree(i) == 0) continue;
    const Eigen::VectorXd x_i = state.x.row(i).transpose();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    for (int j : graph.neighbors(i)) {
      const int e = graph.edge_index(i, j);
      const Eigen::VectorXd x_j = state.x.row(j).transpose();
      const bool lower = i < j;
      // The worst-case audit tracks the model variance even when a hook
      // replaces the draw itself.
      const double model_variance =
          link_variance(scenario.channel.sigma[e], scenario.channel.r[i],
                        scenario.channel.alpha, x_i, x_j);
      min_variance = std::min(min_variance, model_variance);

      Eigen::VectorXd noise = Eigen::VectorXd::Zero(n);
      double variance = model_variance;
      if (scenario.noise == NoiseMode::kIndependent) {
        rng::GaussianStream gs(seed, run_index,
                               static_cast<std::uint32_t>(state.t),
                               stream_id(e, lower, scenario.noise));
        const Reception rec =
            sample_reception(gs, scenario.channel.sigma[e],
                             scenario.channel.r[i], scenario.channel.alpha,
                             x_i, x_j);
        noise = rec.noise;
        variance = rec.variance;
      } else if (scenario.noise == NoiseMode::kSharedEdge) {
        const auto& edge = graph.edges()[e];
        const Eigen::VectorXd x_low = state.x.row(edge.a).transpose();
        const Eigen::VectorXd x_high = state.x.row(edge.b).transpose();
        rng::GaussianStream gs(seed, run_index,
                               static_cast<std::uint32_t>(state.t),
                               stream_id(e, lower, scenario.noise));
        const Reception rec =
            sample_reception(gs, scenario.channel.sigma[e],
                             scenario.channel.r[edge.a],
                             scenario.channel.alpha, x_low, x_high);
        noise = lower ? rec.noise : Eigen::VectorXd(-rec.noise);
        variance = rec.variance;
      }
      if (trace) {
        trace->receptions.push_back({e, i, noise, variance});
      }
      sum += (x_j + noise) + scenario.formation.offset(graph, i, j) - x_i;
    }
    inputs.row(i) = (c_t * gains.gain(i, state.t) * sum).transpose();
  }
  state.x += inputs;
  state.t += 1;
  if (trace) trace->min_variance = min_variance;
}

TrajectoryLog run(const Scenario& scenario, const GainSchedule& gains,
                  std::uint64_t seed, int horizon, std::uint32_t run_index) {
  scenario.validate();
  if (horizon < 0) throw ValidationError("horizon must be >= 0");
  if (gains.horizon() < horizon) {
    throw GainMissing("gain table covers " + std::to_string(gains.horizon()) +
                      " steps, need " + std::to_string(horizon));
  }
  TrajectoryLog log;
  log.x.reserve(horizon + 1);
  log.xi.reserve(horizon + 1);
  log.xi_sq.reserve(horizon + 1);
  log.min_link_variance.reserve(horizon);

  SimState state{0, scenario.x0};
  StepTrace trace;
  for (int t = 0;; ++t) {
    log.x.push_back(state.x);
    log.xi.push_back(edge_errors(state.x, scenario.graph, scenario.formation));
    log.xi_sq.push_back(log.xi.back().squaredNorm());
    if (t == horizon) break;
    step(state, scenario, gains, seed, run_index, &trace);
    log.min_link_variance.push_back(trace.min_variance);
  }
  return log;
}

TrajectoryLog run(const Scenario& scenario, std::uint64_t seed, int horizon) {
  scenario.validate();
  const GainSchedule gains = GainSchedule::compute(
      scenario.graph, scenario.control, scenario.c_schedule, horizon);
  return run(scenario, gains, seed, horizon);
}

MCStats monte_carlo(const Scenario& scenario, const GainSchedule& gains,
                    int n_runs, int horizon, std::uint64_t base_seed,
                    Exec exec) {
  scenario.validate();
  if (n_runs < 2) {
    throw ValidationError("monte_carlo requires n_runs >= 2");
  }
  if (gains.horizon() < horizon) {
    throw GainMissing("gain table too short for the requested horizon");
  }
  const int xi_dim = scenario.graph.n_edges() * scenario.state_dim();

  std::vector<std::vector<double>> xi_sq(n_runs);
  std::vector<Eigen::VectorXd> final_xi(n_runs);

  const auto one_run = [&](int r) {
    TrajectoryLog log = run(scenario, gains, base_seed, horizon,
                            static_cast<std::uint32_t>(r));
    xi_sq[r] = std::move(log.xi_sq);
    final_xi[r] = std::move(log.xi.back());
  };

  if (exec == Exec::kOpenMP) {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < n_runs; ++r) one_run(r);
  } else {
    for (int r = 0; r < n_runs; ++r) one_run(r);
  }

  // Reduce in run order so the result is independent of thread count.
  MCStats stats;
  stats.runs = n_runs;
  stats.mean_sq.assign(horizon + 1, 0.0);
  for (int r = 0; r < n_runs; ++r) {
    for (int t = 0; t <= horizon; ++t) stats.mean_sq[t] += xi_sq[r][t];
  }
  for (double& v : stats.mean_sq) v /= n_runs;

  stats.mean_xi_final = Eigen::VectorXd::Zero(xi_dim);
  for (int r = 0; r < n_runs; ++r) stats.mean_xi_final += final_xi[r];
  stats.mean_xi_final /= n_runs;

  stats.var_xi_final = Eigen::VectorXd::Zero(xi_dim);
  for (int r = 0; r < n_runs; ++r) {
    const Eigen::VectorXd dev = final_xi[r] - stats.mean_xi_final;
    stats.var_xi_final += dev.cwiseProduct(dev);
  }
  stats.var_xi_final /= (n_runs - 1);
  stats.final_xi = std::move(final_xi);
  return stats;
}

}  // namespace dpform
