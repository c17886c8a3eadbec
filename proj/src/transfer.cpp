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

#include "cvswap/transfer.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cvswap {

GaussianState output_state(const TransferMatrix& tm) {
  if (tm.matrix.cols() != tm.input_variances.size()) {
    throw std::invalid_argument("output_state: input variance length mismatch");
  }
  if (tm.matrix.rows() % 2 != 0) {
    throw std::invalid_argument("output_state: odd output dimension");
  }
  Eigen::MatrixXd cov =
      tm.matrix * tm.input_variances.asDiagonal() * tm.matrix.transpose();
  // Exact symmetry for downstream eigen solves.
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState{static_cast<int>(tm.matrix.rows()) / 2, cov};
}

TransferBuilder::TransferBuilder(const std::vector<SqueezerSpec>& inputs)
    : n_system_(static_cast<int>(inputs.size())) {
  if (inputs.empty()) {
    throw std::invalid_argument("TransferBuilder: no input modes");
  }
  map_ = Eigen::MatrixXd::Identity(2 * n_system_, 2 * n_system_);
  input_variances_.reserve(2 * inputs.size());
  for (const auto& spec : inputs) {
    const GaussianState s = squeezed_vacuum(spec);  // validates the spec
    input_variances_.push_back(s.cov(0, 0));
    input_variances_.push_back(s.cov(1, 1));
  }
}

void TransferBuilder::apply(const SymplecticOp& op) {
  map_ = embed_symplectic(op, n_system_) * map_;
}

void TransferBuilder::add_loss(int mode, double eta) {
  if (eta < 0.0 || eta > 1.0) {
    throw std::invalid_argument("add_loss: efficiency outside [0,1]");
  }
  if (mode < 0 || mode >= n_system_) {
    throw std::out_of_range("add_loss: mode out of range");
  }
  const Eigen::Index cols = map_.cols();
  map_.conservativeResize(Eigen::NoChange, cols + 2);
  map_.rightCols(2).setZero();
  map_.row(2 * mode) *= std::sqrt(eta);
  map_.row(2 * mode + 1) *= std::sqrt(eta);
  map_(2 * mode, cols) = std::sqrt(1.0 - eta);
  map_(2 * mode + 1, cols + 1) = std::sqrt(1.0 - eta);
  input_variances_.push_back(1.0);
  input_variances_.push_back(1.0);
}

void TransferBuilder::add_scaled_row(int target_mode, Quadrature target_quad,
                                     int source_mode, Quadrature source_quad,
                                     double coeff) {
  auto row = [&](int mode, Quadrature q) {
    if (mode < 0 || mode >= n_system_) {
      throw std::out_of_range("add_scaled_row: mode out of range");
    }
    return 2 * mode + (q == Quadrature::amplitude ? 0 : 1);
  };
  map_.row(row(target_mode, target_quad)) +=
      coeff * map_.row(row(source_mode, source_quad));
}

TransferMatrix TransferBuilder::finish(const std::vector<int>& output_modes) const {
  TransferMatrix tm;
  tm.matrix.resize(2 * static_cast<Eigen::Index>(output_modes.size()), map_.cols());
  for (std::size_t i = 0; i < output_modes.size(); ++i) {
    const int mode = output_modes[i];
    if (mode < 0 || mode >= n_system_) {
      throw std::out_of_range("finish: output mode out of range");
    }
    tm.matrix.row(2 * i) = map_.row(2 * mode);
    tm.matrix.row(2 * i + 1) = map_.row(2 * mode + 1);
  }
  tm.input_variances = Eigen::Map<const Eigen::VectorXd>(
      input_variances_.data(), static_cast<Eigen::Index>(input_variances_.size()));
  return tm;
}

MonteCarloEstimate monte_carlo_variance(const TransferMatrix& tm,
                                        const Eigen::VectorXd& coeffs,
                                        int n_samples, std::uint64_t seed) {
  if (n_samples < 10000) {
    throw std::invalid_argument("monte_carlo_variance: need at least 1e4 samples");
  }
  if (coeffs.size() != tm.matrix.rows()) {
    throw std::invalid_argument("monte_carlo_variance: coefficient length mismatch");
  }
  if ((tm.input_variances.array() <= 0.0).any()) {
    throw std::invalid_argument("monte_carlo_variance: degenerate input variance");
  }
  // c^T (M z) = (M^T c)^T z, so fold the map into the coefficients once.
  const Eigen::VectorXd w = tm.matrix.transpose() * coeffs;
  const Eigen::VectorXd sigma = tm.input_variances.cwiseSqrt();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    double value = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      value += w(i) * sigma(i) * unit(rng);
    }
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / n_samples;
  const double var = (sum_sq - n_samples * mean * mean) / (n_samples - 1);
  // Variance of the sample variance of a Gaussian is 2 sigma^4 / (n-1).
  return MonteCarloEstimate{var, var * std::sqrt(2.0 / (n_samples - 1))};
}

}  // namespace cvswap
