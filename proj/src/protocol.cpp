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

#include "cvswap/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace cvswap {

namespace {

void check_gain(double gain) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) {
    throw std::invalid_argument("feedforward gain must be finite and >= 0");
  }
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("channel efficiency outside [0,1]");
  }
}

// Output row selection after the joint measurement on (0, partner_first).
// The balanced splitter leaves mu = (m0 + m1)/sqrt(2) in slot 0 and
// upsilon = (m0 - m1)/sqrt(2) in slot partner_first.
struct SwapLayout {
  int n_modes;            // joint system size before measurement
  int upsilon;            // slot holding the x_upsilon photocurrent
  int mu;                 // slot holding the p_mu photocurrent
  std::vector<int> outputs;
};

SwapLayout ghz_ghz_layout() { return {6, 3, 0, {2, 1, 4, 5}}; }
SwapLayout ghz_epr_layout() { return {5, 3, 0, {4, 1, 2}}; }

// Rows of the post-splitter system map extended by the feedforward terms.
Eigen::MatrixXd feedforward_matrix(const SwapLayout& layout,
                                   const FeedforwardSpec& ff) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(2 * layout.n_modes, 2 * layout.n_modes);
  const double c = ff.coefficient();
  for (const auto& route : ff.routes) {
    const int target = 2 * route.target_mode +
                       (route.quad == Quadrature::amplitude ? 0 : 1);
    const int source = route.source == Photocurrent::x_upsilon
                           ? 2 * layout.upsilon
                           : 2 * layout.mu + 1;
    f(target, source) += c;
  }
  return f;
}

Eigen::MatrixXd selection_matrix(const SwapLayout& layout) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(
      2 * static_cast<Eigen::Index>(layout.outputs.size()), 2 * layout.n_modes);
  for (std::size_t i = 0; i < layout.outputs.size(); ++i) {
    p(2 * i, 2 * layout.outputs[i]) = 1.0;
    p(2 * i + 1, 2 * layout.outputs[i] + 1) = 1.0;
  }
  return p;
}

SymplecticOp measurement_splitter(int partner_first) {
  SymplecticOp bs = beam_splitter_op(0.5);
  bs.target_modes = {0, partner_first};
  return bs;
}

GaussianState run_swap(const GaussianState& joint, const SwapLayout& layout,
                       const FeedforwardSpec& ff) {
  const Eigen::MatrixXd n =
      selection_matrix(layout) * feedforward_matrix(layout, ff) *
      embed_symplectic(measurement_splitter(layout.upsilon), layout.n_modes);
  Eigen::MatrixXd cov = n * joint.cov * n.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState{static_cast<int>(layout.outputs.size()), cov};
}

}  // namespace

GaussianState lossy_channel(const GaussianState& state, int mode,
                            const ChannelSpec& spec) {
  check_eta(spec.eta);
  if (mode < 0 || mode >= state.n_modes) {
    throw std::out_of_range("lossy_channel: mode out of range");
  }
  Eigen::MatrixXd scale = Eigen::MatrixXd::Identity(state.cov.rows(), state.cov.cols());
  scale(2 * mode, 2 * mode) = std::sqrt(spec.eta);
  scale(2 * mode + 1, 2 * mode + 1) = std::sqrt(spec.eta);
  Eigen::MatrixXd cov = scale * state.cov * scale;
  cov(2 * mode, 2 * mode) += 1.0 - spec.eta;
  cov(2 * mode + 1, 2 * mode + 1) += 1.0 - spec.eta;
  return GaussianState{state.n_modes, cov};
}

JointMeasurement joint_measurement_map(int m1, int m2, int n_modes) {
  if (m1 == m2) {
    throw std::invalid_argument("joint_measurement_map: modes must be distinct");
  }
  const double w = 1.0 / std::sqrt(2.0);
  JointMeasurement jm;
  jm.x_upsilon = quadrature_combination(
      n_modes, {{m1, Quadrature::amplitude, w}, {m2, Quadrature::amplitude, -w}});
  jm.p_mu = quadrature_combination(
      n_modes, {{m1, Quadrature::phase, w}, {m2, Quadrature::phase, w}});
  return jm;
}

double FeedforwardSpec::coefficient() const { return std::sqrt(2.0) * gain; }

FeedforwardSpec ghz_ghz_feedforward(double gain) {
  check_gain(gain);
  return FeedforwardSpec{gain,
                         {{4, Quadrature::amplitude, Photocurrent::x_upsilon},
                          {4, Quadrature::phase, Photocurrent::p_mu},
                          {5, Quadrature::amplitude, Photocurrent::x_upsilon}}};
}

FeedforwardSpec ghz_epr_feedforward(double gain) {
  check_gain(gain);
  return FeedforwardSpec{gain,
                         {{4, Quadrature::amplitude, Photocurrent::x_upsilon},
                          {4, Quadrature::phase, Photocurrent::p_mu}}};
}

GaussianState swap_ghz_ghz(const GaussianState& state_a,
                           const GaussianState& state_b, double gain) {
  if (state_a.n_modes != 3 || state_b.n_modes != 3) {
    throw std::invalid_argument("swap_ghz_ghz: both inputs must have 3 modes");
  }
  return run_swap(tensor(state_a, state_b), ghz_ghz_layout(),
                  ghz_ghz_feedforward(gain));
}

GaussianState swap_ghz_epr(const GaussianState& state_a,
                           const GaussianState& state_e, double gain,
                           const ChannelSpec& channel) {
  if (state_a.n_modes != 3 || state_e.n_modes != 2) {
    throw std::invalid_argument("swap_ghz_epr: expected a 3-mode and a 2-mode input");
  }
  const GaussianState joint = lossy_channel(tensor(state_a, state_e), 0, channel);
  return run_swap(joint, ghz_epr_layout(), ghz_epr_feedforward(gain));
}

namespace {

TransferMatrix swap_transfer(const NetworkRecipe& recipe_a,
                             const NetworkRecipe& recipe_partner, double gain,
                             const ChannelSpec* channel) {
  std::vector<SqueezerSpec> inputs = recipe_a.squeezers;
  inputs.insert(inputs.end(), recipe_partner.squeezers.begin(),
                recipe_partner.squeezers.end());
  TransferBuilder builder(inputs);

  const int offset = static_cast<int>(recipe_a.squeezers.size());
  for (SymplecticOp op : network_ops(recipe_a)) {
    builder.apply(op);
  }
  for (SymplecticOp op : network_ops(recipe_partner)) {
    for (int& mode : op.target_modes) {
      mode += offset;
    }
    builder.apply(op);
  }
  if (channel != nullptr) {
    builder.add_loss(0, channel->eta);
  }

  const SwapLayout layout = channel == nullptr ? ghz_ghz_layout() : ghz_epr_layout();
  const FeedforwardSpec ff = channel == nullptr ? ghz_ghz_feedforward(gain)
                                                : ghz_epr_feedforward(gain);
  builder.apply(measurement_splitter(layout.upsilon));
  const double c = ff.coefficient();
  for (const auto& route : ff.routes) {
    if (route.source == Photocurrent::x_upsilon) {
      builder.add_scaled_row(route.target_mode, route.quad, layout.upsilon,
                             Quadrature::amplitude, c);
    } else {
      builder.add_scaled_row(route.target_mode, route.quad, layout.mu,
                             Quadrature::phase, c);
    }
  }
  return builder.finish(layout.outputs);
}

}  // namespace

TransferMatrix swap_ghz_ghz_transfer(const NetworkRecipe& recipe_a,
                                     const NetworkRecipe& recipe_b, double gain) {
  if (recipe_a.variant == NetworkVariant::epr ||
      recipe_b.variant == NetworkVariant::epr) {
    throw std::invalid_argument("swap_ghz_ghz_transfer: both recipes must be GHZ variants");
  }
  return swap_transfer(recipe_a, recipe_b, gain, nullptr);
}

TransferMatrix swap_ghz_epr_transfer(const NetworkRecipe& recipe_a,
                                     const NetworkRecipe& recipe_e, double gain,
                                     const ChannelSpec& channel) {
  if (recipe_a.variant == NetworkVariant::epr ||
      recipe_e.variant != NetworkVariant::epr) {
    throw std::invalid_argument("swap_ghz_epr_transfer: expected a GHZ and an EPR recipe");
  }
  check_eta(channel.eta);
  return swap_transfer(recipe_a, recipe_e, gain, &channel);
}

Eigen::MatrixXd theoretical_output_covariance(double v_sq, double v_anti,
                                              double gain, double eta) {
  if (v_sq <= 0.0 || v_anti <= 0.0 || v_sq * v_anti < 1.0 - kPhysicalSlack) {
    throw std::invalid_argument("theoretical_output_covariance: unphysical squeezer variances");
  }
  check_gain(gain);
  check_eta(eta);
  const double v = v_sq;
  const double w = v_anti;
  const double g = gain;
  const double g2 = g * g;
  const double rt = std::sqrt(eta);

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(6, 6);
  s(0, 0) = (4.0 * g2 * eta + 3.0 * (1.0 + g) * (1.0 + g)) / 6.0 * v +
            (2.0 * g2 * eta + 3.0 * (1.0 - g) * (1.0 - g)) / 6.0 * w +
            g2 * (1.0 - eta);
  s(1, 1) = (2.0 * g2 * eta + 3.0 * (1.0 + g) * (1.0 + g)) / 6.0 * v +
            (4.0 * g2 * eta + 3.0 * (g - 1.0) * (g - 1.0)) / 6.0 * w +
            g2 * (1.0 - eta);
  s(2, 2) = s(4, 4) = 2.0 / 3.0 * v + 1.0 / 3.0 * w;
  s(3, 3) = s(5, 5) = 1.0 / 3.0 * v + 2.0 / 3.0 * w;

  const double xx_1j = -(g * rt / 3.0) * v + (g * rt / 3.0) * w;
  const double pp_1j = -(g * rt / 3.0) * w + (g * rt / 3.0) * v;
  s(0, 2) = s(2, 0) = xx_1j;
  s(0, 4) = s(4, 0) = xx_1j;
  s(1, 3) = s(3, 1) = pp_1j;
  s(1, 5) = s(5, 1) = pp_1j;
  s(2, 4) = s(4, 2) = -v / 3.0 + w / 3.0;
  s(3, 5) = s(5, 3) = -w / 3.0 + v / 3.0;
  return s;
}

double optimal_classical_gain(double v_sq, double v_anti) {
  if (v_sq <= 0.0 || v_anti <= 0.0 || v_sq * v_anti < 1.0 - kPhysicalSlack) {
    throw std::invalid_argument("optimal_classical_gain: unphysical squeezer variances");
  }
  return (v_anti - v_sq) / (v_anti + v_sq);
}

GaussianState conditional_swap_oracle(const GaussianState& state_a,
                                      const GaussianState& partner, double gain,
                                      double eta) {
  if (state_a.n_modes != 3) {
    throw std::invalid_argument("conditional_swap_oracle: first input must have 3 modes");
  }
  const bool epr_case = partner.n_modes == 2;
  if (!epr_case && partner.n_modes != 3) {
    throw std::invalid_argument("conditional_swap_oracle: partner must have 2 or 3 modes");
  }
  if (!epr_case && eta != 1.0) {
    throw std::invalid_argument("conditional_swap_oracle: the GHZ protocol takes no channel loss");
  }

  GaussianState joint = tensor(state_a, partner);
  if (epr_case) {
    joint = lossy_channel(joint, 0, ChannelSpec{eta});
  }
  const SwapLayout layout = epr_case ? ghz_epr_layout() : ghz_ghz_layout();
  const FeedforwardSpec ff =
      epr_case ? ghz_epr_feedforward(gain) : ghz_ghz_feedforward(gain);
  joint = apply(measurement_splitter(layout.upsilon), joint);

  const int n = layout.n_modes;
  // Quadratures of the consumed modes, ordered (x_ups, p_ups, x_mu, p_mu);
  // the homodyne detectors read positions 0 and 3 of this tuple.
  const std::vector<int> consumed = {2 * layout.upsilon, 2 * layout.upsilon + 1,
                                     2 * layout.mu, 2 * layout.mu + 1};
  std::vector<int> kept_modes;
  std::vector<int> kept;
  for (int m = 0; m < n; ++m) {
    if (m != layout.upsilon && m != layout.mu) {
      kept_modes.push_back(m);
      kept.push_back(2 * m);
      kept.push_back(2 * m + 1);
    }
  }
  const int nk = static_cast<int>(kept.size());

  Eigen::MatrixXd sigma_rr(nk, nk);
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      sigma_rr(i, j) = joint.cov(kept[i], kept[j]);
    }
  }
  Eigen::MatrixXd cross(nk, 4);
  Eigen::Matrix4d block;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      block(i, j) = joint.cov(consumed[i], consumed[j]);
    }
    for (int r = 0; r < nk; ++r) {
      cross(r, i) = joint.cov(kept[r], consumed[i]);
    }
  }

  // Homodyne conditioning on (x_ups, p_mu): Schur complement through the
  // pseudo-inverse of the projected block.
  Eigen::Matrix4d projector = Eigen::Matrix4d::Zero();
  projector(0, 0) = 1.0;
  projector(3, 3) = 1.0;
  const Eigen::Matrix4d projected = projector * block * projector;
  const Eigen::Matrix4d pinv =
      projected.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::MatrixXd conditional = sigma_rr - cross * pinv * cross.transpose();

  // Outcome statistics and the gain-weighted displacement applied to the
  // kept modes; averaging over outcomes restores the mismatch noise.
  Eigen::Matrix2d outcome_cov;
  outcome_cov << block(0, 0), block(0, 3), block(3, 0), block(3, 3);
  Eigen::MatrixXd outcome_cross(nk, 2);
  outcome_cross.col(0) = cross.col(0);
  outcome_cross.col(1) = cross.col(3);

  auto kept_position = [&kept_modes](int mode) {
    for (std::size_t i = 0; i < kept_modes.size(); ++i) {
      if (kept_modes[i] == mode) {
        return static_cast<int>(i);
      }
    }
    throw std::logic_error("conditional_swap_oracle: mode is not part of the kept set");
  };

  Eigen::MatrixXd displacement = Eigen::MatrixXd::Zero(nk, 2);
  const double c = ff.coefficient();
  for (const auto& route : ff.routes) {
    const int pos = kept_position(route.target_mode);
    const int row = 2 * pos + (route.quad == Quadrature::amplitude ? 0 : 1);
    const int col = route.source == Photocurrent::x_upsilon ? 0 : 1;
    displacement(row, col) += c;
  }

  const Eigen::MatrixXd shift =
      outcome_cross * outcome_cov.inverse() + displacement;
  Eigen::MatrixXd ensemble = conditional + shift * outcome_cov * shift.transpose();
  ensemble = 0.5 * (ensemble + ensemble.transpose()).eval();

  // Reorder the kept modes into the protocol's output order.
  const int n_out = static_cast<int>(layout.outputs.size());
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(2 * n_out, nk);
  for (int i = 0; i < n_out; ++i) {
    const int pos = kept_position(layout.outputs[i]);
    perm(2 * i, 2 * pos) = 1.0;
    perm(2 * i + 1, 2 * pos + 1) = 1.0;
  }
  return GaussianState{n_out, perm * ensemble * perm.transpose()};
}

}  // namespace cvswap
