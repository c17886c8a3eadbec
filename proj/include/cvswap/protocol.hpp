// Copyright 2026 The cvswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "cvswap/builders.hpp"
#include "cvswap/gaussian.hpp"
#include "cvswap/transfer.hpp"

namespace cvswap {

/// Pure-loss channel: mode -> sqrt(eta) mode + sqrt(1-eta) vacuum.
struct ChannelSpec {
  double eta = 1.0;
};

GaussianState lossy_channel(const GaussianState& state, int mode,
                            const ChannelSpec& spec);

/// The two photocurrents of the balanced joint measurement on (m1, m2):
/// x_upsilon = (x_m1 - x_m2)/sqrt(2) and p_mu = (p_m1 + p_m2)/sqrt(2),
/// as coefficient vectors over the 2N quadratures.
struct JointMeasurement {
  Eigen::VectorXd x_upsilon;
  Eigen::VectorXd p_mu;
};
JointMeasurement joint_measurement_map(int m1, int m2, int n_modes);

enum class Photocurrent { x_upsilon, p_mu };

/// Classical feedforward wiring: each photocurrent is added to a target
/// quadrature with coefficient sqrt(2) * gain (the measurement splitter's
/// 1/sqrt(2) makes this G * (x_m1 - x_m2) on the raw quadratures).
struct FeedforwardSpec {
  double gain = 0.0;
  struct Route {
    int target_mode;
    Quadrature quad;
    Photocurrent source;
  };
  std::vector<Route> routes;

  double coefficient() const;
};

/// Wiring of the GHZ x GHZ protocol: x_upsilon to x of B2 and B3,
/// p_mu to p of B2. Target modes are indexed in the joint (A, B) system.
FeedforwardSpec ghz_ghz_feedforward(double gain);

/// Wiring of the GHZ x EPR protocol: x_upsilon to x of E2, p_mu to p of E2.
FeedforwardSpec ghz_epr_feedforward(double gain);

/// Swap between two tripartite GHZ states: joint measurement on (A1, B1)
/// plus feedforward with the given gain. Output modes are ordered
/// (C1, C2, C3, C4) = (A3, A2, B2, B3).
GaussianState swap_ghz_ghz(const GaussianState& state_a,
                           const GaussianState& state_b, double gain);

/// Swap between a tripartite GHZ state and an EPR state, with loss applied
/// to A1 before the joint measurement on (A1, E1). Output modes are ordered
/// (D1, D2, D3) = (E2, A2, A3).
GaussianState swap_ghz_epr(const GaussianState& state_a,
                           const GaussianState& state_e, double gain,
                           const ChannelSpec& channel);

/// End-to-end transfer map from squeezer quadratures (plus loss-port vacua)
/// to the surviving output quadratures; output_state() of the result equals
/// the corresponding swap applied to the built resource states.
TransferMatrix swap_ghz_ghz_transfer(const NetworkRecipe& recipe_a,
                                     const NetworkRecipe& recipe_b, double gain);
TransferMatrix swap_ghz_epr_transfer(const NetworkRecipe& recipe_a,
                                     const NetworkRecipe& recipe_e, double gain,
                                     const ChannelSpec& channel);

/// Closed-form 6x6 output covariance of the GHZ x EPR swap for equal
/// squeezer variances (v_sq, v_anti), feedforward gain and channel
/// efficiency eta, assembled element by element.
Eigen::MatrixXd theoretical_output_covariance(double v_sq, double v_anti,
                                              double gain, double eta);

/// Gain minimizing the feedforward noise for equal squeezers:
/// (v_anti - v_sq) / (v_anti + v_sq).
double optimal_classical_gain(double v_sq, double v_anti);

/// Independent route to the swap output: conditions the pre-measurement
/// state on the two homodyne outcomes via a Schur-complement update with a
/// projector pseudo-inverse onto the measured quadratures, then restores the
/// ensemble covariance from the gain-weighted outcome displacement. Must
/// agree with the transfer-matrix route. The partner's mode count selects
/// the protocol (3 = GHZ, 2 = EPR); eta applies to the EPR protocol only.
GaussianState conditional_swap_oracle(const GaussianState& state_a,
                                      const GaussianState& partner, double gain,
                                      double eta = 1.0);

}  // namespace cvswap
