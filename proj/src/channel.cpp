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

#include "dpform/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpform/errors.hpp"

namespace dpform {

void ChannelParams::validate(int n_agents, int n_edges) const {
  if (static_cast<int>(sigma.size()) != n_edges) {
    throw DimensionMismatch("channel sigma list has " +
                            std::to_string(sigma.size()) + " entries for " +
                            std::to_string(n_edges) + " edges");
  }
  if (static_cast<int>(r.size()) != n_agents) {
    throw DimensionMismatch("channel r list has " + std::to_string(r.size()) +
                            " entries for " + std::to_string(n_agents) +
                            " agents");
  }
  for (double s : sigma) {
    if (!(s > 0.0)) throw NonPositiveParameter("channel sigma must be > 0");
  }
  for (double ri : r) {
    if (!(ri > 0.0)) throw NonPositiveParameter("receiver floor r must be > 0");
  }
  if (!(alpha >= 1.0)) {
    throw NonPositiveParameter("path-loss exponent alpha must be >= 1");
  }
}

double ChannelParams::r_floor() const {
  return *std::min_element(r.begin(), r.end());
}

double derive_sigma(double k1, double k2) {
  if (!(k1 > 0.0) || !(k2 > 0.0)) {
    throw NonPositiveParameter("derive_sigma requires k1 > 0 and k2 > 0");
  }
  return k1 / (k2 * k2);
}

double link_variance(double sigma_e, double r_receiver, double alpha,
                     const Eigen::VectorXd& x_receiver,
                     const Eigen::VectorXd& x_sender) {
  const double dist_sq = (x_receiver - x_sender).squaredNorm();
  return sigma_e * std::pow(dist_sq, alpha) + r_receiver;
}

Reception sample_reception(rng::GaussianStream& stream, double sigma_e,
                           double r_receiver, double alpha,
                           const Eigen::VectorXd& x_receiver,
                           const Eigen::VectorXd& x_sender) {
  if (!(sigma_e > 0.0) || !(r_receiver > 0.0)) {
    throw NonPositiveParameter(
        "sample_reception requires sigma > 0 and r > 0");
  }
  Reception rec;
  rec.variance =
      link_variance(sigma_e, r_receiver, alpha, x_receiver, x_sender);
  const double scale = std::sqrt(rec.variance);
  rec.noise.resize(x_sender.size());
  for (Eigen::Index d = 0; d < rec.noise.size(); ++d) {
    rec.noise(d) = scale * stream.next();
  }
  rec.value = x_sender + rec.noise;
  return rec;
}

}  // namespace dpform
