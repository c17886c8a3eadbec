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

#include <Eigen/Dense>

#include <initializer_list>
#include <vector>

namespace cvswap {

// Numerical tolerances for dense double-precision algebra on small matrices.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kPhysicalSlack = 1e-9;

// Quadrature convention: x = a + a^dag, p = (a - a^dag)/i, so a single-mode
// vacuum has unit variance in both quadratures. Quadratures are interleaved
// as (x1, p1, x2, p2, ...).
enum class Quadrature { amplitude, phase };

/// Zero-mean Gaussian state of n_modes optical modes, described entirely by
/// its 2N x 2N covariance matrix in shot-noise units.
struct GaussianState {
  int n_modes = 0;
  Eigen::MatrixXd cov;
};

/// Linear quadrature transform acting on an ordered list of target modes.
/// matrix is 2M x 2M over the targets' interleaved quadratures.
struct SymplecticOp {
  Eigen::MatrixXd matrix;
  std::vector<int> target_modes;
};

/// Squeezed-vacuum source: variance v_sq on the squeezed quadrature and
/// v_anti on its conjugate. Pure squeezing has v_sq * v_anti = 1; larger
/// products model impure experimental sources.
struct SqueezerSpec {
  double v_sq = 1.0;
  double v_anti = 1.0;
  Quadrature squeezed_quadrature = Quadrature::amplitude;

  static SqueezerSpec pure(double r, Quadrature q);
  // Variances from noise levels in dB relative to shot noise
  // (squeezing negative, anti-squeezing positive).
  static SqueezerSpec from_db(double squeezing_db, double anti_squeezing_db,
                              Quadrature q);
};

enum class RotationKind { fourier, pi_rotation };

/// Block-diagonal symplectic form of [[0,1],[-1,0]] blocks, one per mode.
Eigen::MatrixXd symplectic_form(int n_modes);

/// n-mode vacuum: identity covariance.
GaussianState vacuum_state(int n_modes);

/// Single-mode squeezed vacuum with the given spec. Rejects specs violating
/// the uncertainty relation v_sq * v_anti >= 1.
GaussianState squeezed_vacuum(const SqueezerSpec& spec);

/// Product state a (x) b; modes of b are shifted past those of a.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Two-mode beam splitter with transmissivity T, acting identically on the
/// x and p blocks: out_k = sqrt(1-T) in_k + sqrt(T) in_l,
/// out_l = sqrt(T) in_k - sqrt(1-T) in_l.
SymplecticOp beam_splitter_op(double transmissivity);

/// Single-mode phase-space rotation. fourier maps (x,p) -> (-p,x);
/// pi_rotation maps (x,p) -> (-x,-p).
SymplecticOp rotation_op(RotationKind kind);

/// Embeds op into the full 2N x 2N quadrature space (identity elsewhere).
Eigen::MatrixXd embed_symplectic(const SymplecticOp& op, int n_modes);

/// sigma -> S sigma S^T with op embedded on its target modes.
GaussianState apply(const SymplecticOp& op, const GaussianState& state);

/// Variance of the quadrature combination c^T R, i.e. c^T cov c.
double combination_variance(const GaussianState& state,
                            const Eigen::VectorXd& coeffs);

/// Convenience builder for combination coefficient vectors.
struct QuadTerm {
  int mode;
  Quadrature quad;
  double weight;
};
Eigen::VectorXd quadrature_combination(int n_modes,
                                       std::initializer_list<QuadTerm> terms);
Eigen::VectorXd quadrature_combination(int n_modes,
                                       const std::vector<QuadTerm>& terms);

/// Symplectic eigenvalues of a symmetric 2N x 2N matrix: the N distinct
/// moduli of the (purely imaginary) eigenvalues of Omega * m, ascending.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& m);

/// Physicality (uncertainty relation): smallest symplectic eigenvalue of the
/// covariance matrix is >= 1 up to slack.
bool is_physical(const GaussianState& state);

}  // namespace cvswap
