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

#ifndef DPFORM_CHANNEL_HPP
#define DPFORM_CHANNEL_HPP

#include <vector>

#include <Eigen/Dense>

#include "dpform/rng.hpp"

namespace dpform {

// Relative-state-dependent AWGN reception. A directed reception (i <- j)
// adds zero-mean Gaussian noise with per-component variance
//   sigma_e * ||x_i - x_j||^(2*alpha) + r_i
// where sigma_e = k1/k2^2 is the per-link noise-to-gain ratio and r_i the
// receiver floor. Channel and receiver noise are folded into one draw;
// the folded distribution is identical.
struct ChannelParams {
  std::vector<double> sigma;  // per edge, canonical edge order
  std::vector<double> r;      // per receiving agent
  double alpha = 1.0;         // path-loss exponent, >= 1

  // Throws NonPositiveParameter on non-positive sigma/r or alpha < 1,
  // DimensionMismatch when sizes disagree with the topology.
  void validate(int n_agents, int n_edges) const;

  double r_floor() const;  // min_i r_i
};

// sigma = k1 / k2^2. Throws NonPositiveParameter.
double derive_sigma(double k1, double k2);

// Scalar per-component reception variance for the link state pair.
double link_variance(double sigma_e, double r_receiver, double alpha,
                     const Eigen::VectorXd& x_receiver,
                     const Eigen::VectorXd& x_sender);

struct Reception {
  Eigen::VectorXd value;  // sender state plus noise
  Eigen::VectorXd noise;
  double variance = 0.0;
};

// Draws one directed reception. The stream must be dedicated to this
// (run, t, directed link) address. Throws NonPositiveParameter.
Reception sample_reception(rng::GaussianStream& stream, double sigma_e,
                           double r_receiver, double alpha,
                           const Eigen::VectorXd& x_receiver,
                           const Eigen::VectorXd& x_sender);

}  // namespace dpform

#endif  // DPFORM_CHANNEL_HPP
