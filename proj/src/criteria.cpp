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

#include "cvswap/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvswap/protocol.hpp"

namespace cvswap {

namespace {

constexpr auto kX = Quadrature::amplitude;
constexpr auto kP = Quadrature::phase;

void check_squeezer_pair(double v, double w, const char* what) {
  if (v <= 0.0 || w <= 0.0 || v * w < 1.0 - kPhysicalSlack) {
    throw std::invalid_argument(std::string(what) + ": unphysical squeezer variances");
  }
}

// Pair order (0,1), (0,2), (1,2) for the mode-pair measurement arrays.
constexpr std::array<std::array<int, 2>, 3> kModePairs{{{0, 1}, {0, 2}, {1, 2}}};
// Ordered (i, j) pairs for var(x_i + p_j).
constexpr std::array<std::array<int, 2>, 6> kOrderedPairs{
    {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}};

}  // namespace

bool CriterionResult::entangled() const {
  return std::all_of(combos.begin(), combos.end(),
                     [&](double v) { return v < boundary; });
}

CriterionResult fourmode_combos(const GaussianState& state, const ComboGains& gains) {
  if (state.n_modes != 4) {
    throw std::invalid_argument("fourmode_combos: expected a 4-mode state");
  }
  if (gains.g.size() != 6) {
    throw std::invalid_argument("fourmode_combos: expected gains g1..g6");
  }
  const auto& g = gains.g;
  auto var = [&](std::initializer_list<QuadTerm> terms) {
    return combination_variance(state, quadrature_combination(4, terms));
  };
  CriterionResult result;
  result.combos = {
      var({{0, kX, 1.0}, {1, kX, -1.0}}) +
          var({{0, kP, 1.0}, {1, kP, 1.0}, {2, kP, g[0]}, {3, kP, g[1]}}),
      var({{1, kX, 1.0}, {2, kX, -1.0}}) +
          var({{0, kP, g[2]}, {1, kP, 1.0}, {2, kP, 1.0}, {3, kP, g[3]}}),
      var({{2, kX, 1.0}, {3, kX, -1.0}}) +
          var({{0, kP, g[4]}, {1, kP, g[5]}, {2, kP, 1.0}, {3, kP, 1.0}}),
  };
  return result;
}

CriterionResult threemode_combos(const GaussianState& state, const ComboGains& gains) {
  if (state.n_modes != 3) {
    throw std::invalid_argument("threemode_combos: expected a 3-mode state");
  }
  if (gains.g.size() != 2) {
    throw std::invalid_argument("threemode_combos: expected gains g7, g8");
  }
  auto var = [&](std::initializer_list<QuadTerm> terms) {
    return combination_variance(state, quadrature_combination(3, terms));
  };
  CriterionResult result;
  result.combos = {
      var({{0, kX, 1.0}, {1, kX, -1.0}}) +
          var({{0, kP, 1.0}, {1, kP, 1.0}, {2, kP, gains.g[0]}}),
      var({{1, kX, 1.0}, {2, kX, -1.0}}) +
          var({{0, kP, gains.g[1]}, {1, kP, 1.0}, {2, kP, 1.0}}),
  };
  return result;
}

ComboGains closedform_gains_fourmode(double v_sq, double v_anti) {
  check_squeezer_pair(v_sq, v_anti, "closedform_gains_fourmode");
  const double v = v_sq;
  const double w = v_anti;
  const double d = w - v;
  const double denom12 = 4.0 * w * w * w * w + 14.0 * w * w * w * v +
                         9.0 * w * w * v * v + 8.0 * w * v * v * v + v * v * v * v;
  const double g1 = 2.0 * d * d * (w + v) * (2.0 * w + v) / denom12;
  const double g2 = 4.0 * w * d * d * d / denom12;
  const double g34 = 2.0 * (w * w - w * v) / ((w + v) * (2.0 * w + v));
  const double g56 = d * d / ((w + v) * (w + 2.0 * v));
  return ComboGains{{g1, g2, g34, g34, g56, g56}};
}

ComboGains closedform_gains_threemode(double v_sq, double v_anti) {
  check_squeezer_pair(v_sq, v_anti, "closedform_gains_threemode");
  const double v = v_sq;
  const double w = v_anti;
  const double d = w - v;
  const double g7 = 2.0 * w * d / ((w + v) * (2.0 * w + v));
  const double g8 = 2.0 * d * d * (w + v) /
                    (2.0 * w * w * w + 3.0 * w * w * v + 6.0 * w * v * v + v * v * v);
  return ComboGains{{g7, g8}};
}

Eigen::VectorXd numeric_gain_search(
    const std::function<double(const Eigen::VectorXd&)>& functional,
    const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi) {
  const Eigen::Index n = box_lo.size();
  if (box_hi.size() != n || n < 1) {
    throw std::invalid_argument("numeric_gain_search: inconsistent box");
  }
  if (((box_hi - box_lo).array() <= 0.0).any()) {
    throw std::invalid_argument("numeric_gain_search: empty box");
  }
  const Eigen::VectorXd center = 0.5 * (box_lo + box_hi);
  const Eigen::VectorXd half = 0.5 * (box_hi - box_lo);

  // A quadratic is exactly determined by its values at the probe points
  // center, center +- h_i e_i and center + h_i e_i + h_j e_j.
  const double f0 = functional(center);
  Eigen::VectorXd grad(n);
  Eigen::MatrixXd hess(n, n);
  std::vector<double> fplus(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd up = center;
    Eigen::VectorXd dn = center;
    up(i) += half(i);
    dn(i) -= half(i);
    const double fp = functional(up);
    const double fm = functional(dn);
    fplus[i] = fp;
    grad(i) = (fp - fm) / (2.0 * half(i));
    hess(i, i) = (fp + fm - 2.0 * f0) / (half(i) * half(i));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Eigen::VectorXd up = center;
      up(i) += half(i);
      up(j) += half(j);
      const double fij = functional(up);
      hess(i, j) = hess(j, i) =
          (fij - fplus[i] - fplus[j] + f0) / (half(i) * half(j));
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
  const double max_ev = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues()(0) <= 1e-10 * std::max(1.0, max_ev)) {
    throw std::runtime_error(
        "numeric_gain_search: stationarity system is singular or not positive definite");
  }
  // Stationarity: hess * (g - center) = -grad.
  return center + hess.ldlt().solve(-grad);
}

Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& cov, int mode) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0) {
    throw std::invalid_argument("partial_transpose: need an even-sized square matrix");
  }
  if (mode < 0 || 2 * mode + 1 >= cov.rows()) {
    throw std::out_of_range("partial_transpose: mode out of range");
  }
  Eigen::MatrixXd flipped = cov;
  flipped.row(2 * mode + 1) *= -1.0;
  flipped.col(2 * mode + 1) *= -1.0;
  return flipped;
}

bool PptReport::inseparable(int k) const { return mu.at(k) < boundary; }

PptReport ppt_values(const GaussianState& state) {
  if (state.n_modes != 3) {
    throw std::invalid_argument("ppt_values: expected a 3-mode state");
  }
  PptReport report;
  for (int k = 0; k < 3; ++k) {
    report.mu[k] = symplectic_eigenvalues(partial_transpose(state.cov, k))(0);
  }
  return report;
}

GaussianState reconstruct_covariance(const MeasurementSet& m) {
  auto need = [](const std::optional<double>& v, const char* what) {
    if (!v.has_value()) {
      throw std::invalid_argument(std::string("reconstruct_covariance: missing ") + what);
    }
    if (*v <= 0.0) {
      throw std::invalid_argument(std::string("reconstruct_covariance: nonpositive ") + what);
    }
    return *v;
  };

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 3; ++i) {
    cov(2 * i, 2 * i) = need(m.var_x[i], "single-quadrature variance");
    cov(2 * i + 1, 2 * i + 1) = need(m.var_p[i], "single-quadrature variance");
  }
  for (int k = 0; k < 3; ++k) {
    const int i = kModePairs[k][0];
    const int j = kModePairs[k][1];
    const double xx = -0.5 * (need(m.xx_diff[k], "x-difference variance") -
                              cov(2 * i, 2 * i) - cov(2 * j, 2 * j));
    const double pp = 0.5 * (need(m.pp_sum[k], "p-sum variance") -
                             cov(2 * i + 1, 2 * i + 1) - cov(2 * j + 1, 2 * j + 1));
    cov(2 * i, 2 * j) = cov(2 * j, 2 * i) = xx;
    cov(2 * i + 1, 2 * j + 1) = cov(2 * j + 1, 2 * i + 1) = pp;
  }
  for (int k = 0; k < 6; ++k) {
    const int i = kOrderedPairs[k][0];
    const int j = kOrderedPairs[k][1];
    const double xp = 0.5 * (need(m.xp_sum[k], "x+p variance") -
                             cov(2 * i, 2 * i) - cov(2 * j + 1, 2 * j + 1));
    cov(2 * i, 2 * j + 1) = cov(2 * j + 1, 2 * i) = xp;
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw std::runtime_error("reconstruct_covariance: reconstructed matrix is not symmetric");
  }
  return GaussianState{3, cov};
}

MeasurementSet synthesize_measurements(const GaussianState& state) {
  if (state.n_modes != 3) {
    throw std::invalid_argument("synthesize_measurements: expected a 3-mode state");
  }
  auto var = [&](std::initializer_list<QuadTerm> terms) {
    return combination_variance(state, quadrature_combination(3, terms));
  };
  MeasurementSet m;
  for (int i = 0; i < 3; ++i) {
    m.var_x[i] = var({{i, kX, 1.0}});
    m.var_p[i] = var({{i, kP, 1.0}});
  }
  for (int k = 0; k < 3; ++k) {
    const int i = kModePairs[k][0];
    const int j = kModePairs[k][1];
    m.xx_diff[k] = var({{i, kX, 1.0}, {j, kX, -1.0}});
    m.pp_sum[k] = var({{i, kP, 1.0}, {j, kP, 1.0}});
  }
  for (int k = 0; k < 6; ++k) {
    const int i = kOrderedPairs[k][0];
    const int j = kOrderedPairs[k][1];
    m.xp_sum[k] = var({{i, kX, 1.0}, {j, kP, 1.0}});
  }
  return m;
}

namespace {

double max_combo_at(CriterionKind kind, GainPolicy policy, double r) {
  const double v = std::exp(-2.0 * r);
  const double w = std::exp(2.0 * r);
  const double gain =
      policy == GainPolicy::unit ? 1.0 : optimal_classical_gain(v, w);
  if (kind == CriterionKind::fourmode) {
    const GaussianState state = swap_ghz_ghz(build_ghz(NetworkRecipe::ghz_a(v, w)),
                                             build_ghz(NetworkRecipe::ghz_b(v, w)), gain);
    const auto combos = fourmode_combos(state, closedform_gains_fourmode(v, w)).combos;
    return *std::max_element(combos.begin(), combos.end());
  }
  const GaussianState state =
      swap_ghz_epr(build_ghz(NetworkRecipe::ghz_a(v, w)),
                   build_epr(NetworkRecipe::epr(v, w)), gain, ChannelSpec{1.0});
  const auto combos = threemode_combos(state, closedform_gains_threemode(v, w)).combos;
  return *std::max_element(combos.begin(), combos.end());
}

}  // namespace

double squeezing_threshold(CriterionKind kind, GainPolicy policy, double tol_r) {
  if (tol_r <= 0.0) {
    throw std::invalid_argument("squeezing_threshold: tolerance must be positive");
  }
  double lo = tol_r;
  double hi = 2.0;
  if (max_combo_at(kind, policy, lo) <= 4.0) {
    // Entangled arbitrarily close to r = 0; threshold collapses to zero.
    return 0.0;
  }
  if (max_combo_at(kind, policy, hi) >= 4.0) {
    throw std::runtime_error("squeezing_threshold: no crossing below r = 2");
  }
  while (hi - lo > tol_r) {
    const double mid = 0.5 * (lo + hi);
    (max_combo_at(kind, policy, mid) > 4.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LossThreshold loss_threshold(double v_sq, double v_anti, double gain, double tol_eta) {
  check_squeezer_pair(v_sq, v_anti, "loss_threshold");
  if (tol_eta <= 0.0) {
    throw std::invalid_argument("loss_threshold: tolerance must be positive");
  }
  const GaussianState ghz = build_ghz(NetworkRecipe::ghz_a(v_sq, v_anti));
  const GaussianState epr = build_epr(NetworkRecipe::epr(v_sq, v_anti));
  auto max_mu = [&](double eta) {
    const auto mu = ppt_values(swap_ghz_epr(ghz, epr, gain, ChannelSpec{eta})).mu;
    return *std::max_element(mu.begin(), mu.end());
  };
  if (max_mu(1.0) >= 1.0) {
    return LossThreshold{LossThreshold::Status::never_entangled, 1.0};
  }
  if (max_mu(0.0) < 1.0) {
    return LossThreshold{LossThreshold::Status::entangled_everywhere, 0.0};
  }
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol_eta) {
    const double mid = 0.5 * (lo + hi);
    (max_mu(mid) >= 1.0 ? lo : hi) = mid;
  }
  return LossThreshold{LossThreshold::Status::crossing, 0.5 * (lo + hi)};
}

}  // namespace cvswap
