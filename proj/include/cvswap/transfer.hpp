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

#include <cstdint>
#include <vector>

#include "cvswap/gaussian.hpp"

namespace cvswap {

/// Heisenberg-picture linear map from independent input quadratures
/// (squeezer outputs plus any loss-port vacua) to the surviving output
/// quadratures. Rows of measured-and-consumed modes are excluded.
struct TransferMatrix {
  Eigen::MatrixXd matrix;           // 2*n_out x 2*n_in
  Eigen::VectorXd input_variances;  // diagonal input covariance, length 2*n_in
};

/// Output covariance M diag(v) M^T as a GaussianState.
GaussianState output_state(const TransferMatrix& tm);

/// Incrementally composes a TransferMatrix: starts from independent squeezer
/// inputs, threads them through symplectic ops, splices in loss-port vacua,
/// and adds feedforward terms to rows before selecting the surviving modes.
class TransferBuilder {
 public:
  explicit TransferBuilder(const std::vector<SqueezerSpec>& inputs);

  int n_system_modes() const { return n_system_; }

  void apply(const SymplecticOp& op);

  /// Mixes mode with a fresh vacuum port: row -> sqrt(eta) row + sqrt(1-eta) port.
  void add_loss(int mode, double eta);

  /// row(target) += coeff * row(source); used for classical feedforward.
  void add_scaled_row(int target_mode, Quadrature target_quad, int source_mode,
                      Quadrature source_quad, double coeff);

  /// Keeps the listed modes, in order, discarding all other rows.
  TransferMatrix finish(const std::vector<int>& output_modes) const;

 private:
  int n_system_;           // live system modes (rows / 2)
  Eigen::MatrixXd map_;    // 2*n_system x n_inputs
  std::vector<double> input_variances_;
};

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Independent sampling oracle: draws zero-mean Gaussian inputs with the
/// transfer matrix's input variances, propagates them through the map and
/// estimates the variance of the quadrature combination coeffs.
MonteCarloEstimate monte_carlo_variance(const TransferMatrix& tm,
                                        const Eigen::VectorXd& coeffs,
                                        int n_samples, std::uint64_t seed);

}  // namespace cvswap
