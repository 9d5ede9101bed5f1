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

#include "dpform/control.hpp"

#include <string>

#include "dpform/errors.hpp"

namespace dpform {

void require_spd(const Eigen::MatrixXd& m, const char* name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw NotPositiveDefinite(std::string(name) + " is not square");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale)) {
    throw NotPositiveDefinite(std::string(name) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.eigenvalues().minCoeff() <= 1e-12 * (1.0 + scale)) {
    throw NotPositiveDefinite(std::string(name) +
                              " is not positive definite");
  }
}

void ControlConfig::validate(int n_agents) const {
  if (static_cast<int>(Q.size()) != n_agents ||
      static_cast<int>(R.size()) != n_agents) {
    throw DimensionMismatch("control weights must be resolved per agent");
  }
  for (int i = 0; i < n_agents; ++i) {
    require_spd(Q[i], "Q");
    require_spd(R[i], "R");
    if (Q[i].rows() != R[i].rows()) {
      throw DimensionMismatch("Q and R dimensions disagree for agent " +
                              std::to_string(i + 1));
    }
  }
  if (horizon_T < 2) {
    throw HorizonTooShort("LQ horizon T must be >= 2, got " +
                          std::to_string(horizon_T));
  }
  if (!(theta > 0.0)) {
    throw NonPositiveParameter("adjacency bound theta must be > 0");
  }
}

Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                         double c_t, int degree, int T) {
  require_spd(Q, "Q");
  require_spd(R, "R");
  if (Q.rows() != R.rows()) {
    throw DimensionMismatch("Q and R dimensions disagree");
  }
  if (!(c_t > 0.0)) throw NonPositiveParameter("c_t must be > 0");
  if (degree < 1) throw NonPositiveParameter("degree must be >= 1");
  if (T < 2) {
    throw HorizonTooShort(
        "T < 2 makes every state term input-independent (zero gain)");
  }
  const auto n = Q.rows();
  const Eigen::MatrixXd stage = c_t * degree * Q;
  // Backward value recursion: cost-to-go z'Pz after the stage-k state cost,
  // P_T = 0, P_k = stage + P - P (R+P)^{-1} P.
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int k = T - 1; k >= 1; --k) {
    const Eigen::MatrixXd correction = P * (R + P).ldlt().solve(P);
    P = stage + P - correction;
    P = 0.5 * (P + P.transpose());
  }
  // u*(0) = -(R+P_1)^{-1} P_1 (x - mean target).
  const Eigen::MatrixXd first_input_gain = (R + P).ldlt().solve(P);
  return first_input_gain / (c_t * degree);
}

Eigen::VectorXd control_input(const Eigen::MatrixXd& K, double c_t,
                              const std::map<int, Eigen::VectorXd>& receptions,
                              const std::map<int, Eigen::VectorXd>& d,
                              const Eigen::VectorXd& x_i) {
  if (receptions.empty() || receptions.size() != d.size()) {
    throw NeighborMismatch("receptions and offsets cover different neighbors");
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(x_i.size());
  for (const auto& [neighbor, received] : receptions) {
    const auto offset = d.find(neighbor);
    if (offset == d.end()) {
      throw NeighborMismatch("no formation offset for neighbor " +
                             std::to_string(neighbor + 1));
    }
    sum += received + offset->second - x_i;
  }
  return c_t * K * sum;
}

GainSchedule GainSchedule::compute(const Graph& graph,
                                   const ControlConfig& config,
                                   const Schedule& c, int horizon) {
  config.validate(graph.n_agents());
  GainSchedule out;
  out.n_agents_ = graph.n_agents();
  out.horizon_ = horizon;
  out.gains_.resize(static_cast<std::size_t>(horizon) * out.n_agents_);
  out.rho_.assign(horizon, 0.0);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < horizon; ++t) {
    const double c_t = c(t);
    double rho = 0.0;
    for (int i = 0; i < out.n_agents_; ++i) {
      Eigen::MatrixXd k;
      if (graph.degree(i) >= 1) {
        k = lqr_gain(config.Q[i], config.R[i], c_t, graph.degree(i),
                     config.horizon_T);
      } else {
        k = Eigen::MatrixXd::Zero(config.Q[i].rows(), config.Q[i].cols());
      }
      rho = std::max(k.jacobiSvd().singularValues()(0), rho);
      out.gains_[static_cast<std::size_t>(t) * out.n_agents_ + i] =
          std::move(k);
    }
    out.rho_[t] = rho;
  }
  return out;
}

const Eigen::MatrixXd& GainSchedule::gain(int agent, int t) const {
  if (t < 0 || t >= horizon_ || agent < 0 || agent >= n_agents_) {
    throw GainMissing("no precomputed gain for agent " +
                      std::to_string(agent + 1) + " at t=" +
                      std::to_string(t));
  }
  return gains_[static_cast<std::size_t>(t) * n_agents_ + agent];
}

double GainSchedule::rho_at(int t) const {
  if (t < 0 || t >= horizon_) {
    throw GainMissing("no precomputed rho_K at t=" + std::to_string(t));
  }
  return rho_[t];
}

double GainSchedule::rho_max(int t_begin, int t_end) const {
  if (t_begin > t_end || t_begin < 0 || t_end >= horizon_) {
    throw EmptyWindow("gain bound window [" + std::to_string(t_begin) + "," +
                      std::to_string(t_end) + "] is empty or out of range");
  }
  double rho = 0.0;
  for (int t = t_begin; t <= t_end; ++t) rho = std::max(rho, rho_[t]);
  return rho;
}

}  // namespace dpform
