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

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "cvswap/gaussian.hpp"

namespace cvswap {

/// Gains applied inside the combination criteria: g1..g6 for the four-mode
/// criteria, g7..g8 for the three-mode criteria.
struct ComboGains {
  std::vector<double> g;
};

/// Left-hand sides of the combination inseparability criteria. All values
/// below the boundary (4 in these units) certify full inseparability.
struct CriterionResult {
  std::vector<double> combos;
  double boundary = 4.0;
  bool entangled() const;
};

/// Four-mode criteria:
///   var(x1-x2) + var(p1+p2+g1*p3+g2*p4)
///   var(x2-x3) + var(g3*p1+p2+p3+g4*p4)
///   var(x3-x4) + var(g5*p1+g6*p2+p3+p4)
CriterionResult fourmode_combos(const GaussianState& state, const ComboGains& gains);

/// Three-mode criteria:
///   var(x1-x2) + var(p1+p2+g7*p3)
///   var(x2-x3) + var(g8*p1+p2+p3)
CriterionResult threemode_combos(const GaussianState& state, const ComboGains& gains);

/// Closed-form minimizers of the four-mode combination variances for equal
/// squeezers (v_sq, v_anti) at the matched classical gain; g3 = g4, g5 = g6.
ComboGains closedform_gains_fourmode(double v_sq, double v_anti);

/// Closed-form (g7, g8) for the three-mode criteria.
ComboGains closedform_gains_threemode(double v_sq, double v_anti);

/// Minimizes a positive-definite quadratic functional of the gains by
/// recovering the exact stationarity system from function evaluations over
/// the given box and solving it. Throws if the quadratic is singular.
Eigen::VectorXd numeric_gain_search(
    const std::function<double(const Eigen::VectorXd&)>& functional,
    const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi);

/// Sign flip of mode k's phase quadrature: T_k sigma T_k.
Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& cov, int mode);

/// Smallest symplectic eigenvalue of the partially transposed covariance,
/// per 1|rest bipartition of a three-mode state. A value below 1 certifies
/// inseparability across that splitting.
struct PptReport {
  std::array<double, 3> mu{};
  double boundary = 1.0;
  bool inseparable(int k) const;
};
PptReport ppt_values(const GaussianState& state);

/// The 18 homodyne variances that determine a three-mode covariance matrix
/// (same-mode x-p covariances are not measured and reconstruct as zero).
/// Pair order for xx_diff and pp_sum: (1,2), (1,3), (2,3).
/// Pair order for xp_sum, var(x_i + p_j): (1,2), (2,1), (1,3), (3,1), (2,3), (3,2).
struct MeasurementSet {
  std::array<std::optional<double>, 3> var_x;
  std::array<std::optional<double>, 3> var_p;
  std::array<std::optional<double>, 3> xx_diff;
  std::array<std::optional<double>, 3> pp_sum;
  std::array<std::optional<double>, 6> xp_sum;
};

/// Covariance elements from the sum/difference variance identities:
/// Cov(R_i,R_j) = +-(var(R_i +- R_j) - var(R_i) - var(R_j)) / 2.
GaussianState reconstruct_covariance(const MeasurementSet& m);

/// The forward direction: reads the 18 variances off a three-mode state.
MeasurementSet synthesize_measurements(const GaussianState& state);

enum class CriterionKind { fourmode, threemode };
enum class GainPolicy { unit, optimal };

/// Smallest pure-squeezing parameter r (v_sq = exp(-2r)) at which the swap
/// output satisfies every combination criterion. The gain policy fixes the
/// classical channel gain (1 or matched-optimal); combo gains always take
/// their closed-form values. Returns 0 when the output is entangled for
/// every r > 0. Bisection to tolerance tol_r.
double squeezing_threshold(CriterionKind kind, GainPolicy policy,
                           double tol_r = 1e-4);

/// Channel efficiency above which all three PPT values of the GHZ x EPR
/// swap output fall below 1.
struct LossThreshold {
  enum class Status { crossing, entangled_everywhere, never_entangled };
  Status status = Status::crossing;
  double eta_star = 0.0;
};
LossThreshold loss_threshold(double v_sq, double v_anti, double gain,
                             double tol_eta = 1e-4);

}  // namespace cvswap
