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

#include "cvswap/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace cvswap {

namespace {

int quad_index(int mode, Quadrature q) {
  return 2 * mode + (q == Quadrature::amplitude ? 0 : 1);
}

void check_mode_range(int mode, int n_modes, const char* what) {
  if (mode < 0 || mode >= n_modes) {
    throw std::out_of_range(std::string(what) + ": mode index " +
                            std::to_string(mode) + " out of range for " +
                            std::to_string(n_modes) + " modes");
  }
}

}  // namespace

SqueezerSpec SqueezerSpec::pure(double r, Quadrature q) {
  return SqueezerSpec{std::exp(-2.0 * r), std::exp(2.0 * r), q};
}

SqueezerSpec SqueezerSpec::from_db(double squeezing_db, double anti_squeezing_db,
                                   Quadrature q) {
  return SqueezerSpec{std::pow(10.0, squeezing_db / 10.0),
                      std::pow(10.0, anti_squeezing_db / 10.0), q};
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

GaussianState vacuum_state(int n_modes) {
  if (n_modes < 1) {
    throw std::invalid_argument("vacuum_state: mode count must be >= 1");
  }
  return GaussianState{n_modes, Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState squeezed_vacuum(const SqueezerSpec& spec) {
  if (spec.v_sq <= 0.0 || spec.v_anti <= 0.0) {
    throw std::invalid_argument("squeezed_vacuum: variances must be positive");
  }
  if (spec.v_sq > spec.v_anti) {
    throw std::invalid_argument(
        "squeezed_vacuum: squeezed variance exceeds anti-squeezed variance");
  }
  if (spec.v_sq * spec.v_anti < 1.0 - kPhysicalSlack) {
    throw std::invalid_argument(
        "squeezed_vacuum: v_sq * v_anti < 1 violates the uncertainty relation");
  }
  GaussianState state{1, Eigen::MatrixXd::Identity(2, 2)};
  if (spec.squeezed_quadrature == Quadrature::amplitude) {
    state.cov(0, 0) = spec.v_sq;
    state.cov(1, 1) = spec.v_anti;
  } else {
    state.cov(0, 0) = spec.v_anti;
    state.cov(1, 1) = spec.v_sq;
  }
  return state;
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  GaussianState out{a.n_modes + b.n_modes,
                    Eigen::MatrixXd::Zero(2 * (a.n_modes + b.n_modes),
                                          2 * (a.n_modes + b.n_modes))};
  out.cov.topLeftCorner(2 * a.n_modes, 2 * a.n_modes) = a.cov;
  out.cov.bottomRightCorner(2 * b.n_modes, 2 * b.n_modes) = b.cov;
  return out;
}

SymplecticOp beam_splitter_op(double transmissivity) {
  if (transmissivity < 0.0 || transmissivity > 1.0) {
    throw std::invalid_argument("beam_splitter_op: transmissivity outside [0,1]");
  }
  const double t = std::sqrt(transmissivity);
  const double s = std::sqrt(1.0 - transmissivity);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  // Identical mixing on the x block (rows/cols 0,2) and p block (1,3).
  for (int q = 0; q < 2; ++q) {
    m(q, q) = s;
    m(q, 2 + q) = t;
    m(2 + q, q) = t;
    m(2 + q, 2 + q) = -s;
  }
  return SymplecticOp{m, {0, 1}};
}

SymplecticOp rotation_op(RotationKind kind) {
  Eigen::MatrixXd m(2, 2);
  if (kind == RotationKind::fourier) {
    m << 0.0, -1.0, 1.0, 0.0;
  } else {
    m << -1.0, 0.0, 0.0, -1.0;
  }
  return SymplecticOp{m, {0}};
}

Eigen::MatrixXd embed_symplectic(const SymplecticOp& op, int n_modes) {
  const int m = static_cast<int>(op.target_modes.size());
  if (op.matrix.rows() != 2 * m || op.matrix.cols() != 2 * m) {
    throw std::invalid_argument("embed_symplectic: matrix size does not match target count");
  }
  std::set<int> seen;
  for (int mode : op.target_modes) {
    check_mode_range(mode, n_modes, "embed_symplectic");
    if (!seen.insert(mode).second) {
      throw std::invalid_argument("embed_symplectic: duplicate target mode");
    }
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int r = 2 * op.target_modes[i];
      const int c = 2 * op.target_modes[j];
      s.block<2, 2>(r, c) = op.matrix.block<2, 2>(2 * i, 2 * j);
    }
  }
  return s;
}

GaussianState apply(const SymplecticOp& op, const GaussianState& state) {
  const Eigen::MatrixXd s = embed_symplectic(op, state.n_modes);
  return GaussianState{state.n_modes, s * state.cov * s.transpose()};
}

double combination_variance(const GaussianState& state,
                            const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != state.cov.rows()) {
    throw std::invalid_argument("combination_variance: coefficient length mismatch");
  }
  if (coeffs.isZero(0.0)) {
    throw std::invalid_argument("combination_variance: all-zero coefficients");
  }
  return coeffs.dot(state.cov * coeffs);
}

Eigen::VectorXd quadrature_combination(int n_modes,
                                       const std::vector<QuadTerm>& terms) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n_modes);
  for (const auto& t : terms) {
    check_mode_range(t.mode, n_modes, "quadrature_combination");
    c(quad_index(t.mode, t.quad)) += t.weight;
  }
  return c;
}

Eigen::VectorXd quadrature_combination(int n_modes,
                                       std::initializer_list<QuadTerm> terms) {
  return quadrature_combination(n_modes, std::vector<QuadTerm>(terms));
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw std::invalid_argument("symplectic_eigenvalues: need an even-sized square matrix");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("symplectic_eigenvalues: matrix is not symmetric");
  }
  const int n = static_cast<int>(m.rows()) / 2;
  // Eigenvalues of Omega*m come in pairs +/- i*mu with mu >= 0; the moduli
  // are the symplectic spectrum, each value appearing twice.
  Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(n) * m, false);
  std::vector<double> mods(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    mods[i] = std::abs(solver.eigenvalues()(i));
  }
  std::sort(mods.begin(), mods.end());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    out(i) = 0.5 * (mods[2 * i] + mods[2 * i + 1]);
  }
  return out;
}

bool is_physical(const GaussianState& state) {
  const Eigen::VectorXd mu = symplectic_eigenvalues(state.cov);
  return mu(0) >= 1.0 - kPhysicalSlack;
}

}  // namespace cvswap
