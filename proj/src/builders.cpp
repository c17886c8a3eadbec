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

#include "cvswap/builders.hpp"

#include <cmath>
#include <stdexcept>

namespace cvswap {

namespace {

constexpr double kGhzT1 = 1.0 / 3.0;
constexpr double kGhzT2 = 0.5;

SymplecticOp on_modes(SymplecticOp op, std::vector<int> modes) {
  op.target_modes = std::move(modes);
  return op;
}

std::vector<Quadrature> expected_pattern(NetworkVariant variant) {
  switch (variant) {
    case NetworkVariant::ghz_a:
      return {Quadrature::amplitude, Quadrature::phase, Quadrature::amplitude};
    case NetworkVariant::ghz_b:
      return {Quadrature::phase, Quadrature::phase, Quadrature::amplitude};
    case NetworkVariant::epr:
      return {Quadrature::phase, Quadrature::amplitude};
  }
  throw std::logic_error("expected_pattern: unknown variant");
}

NetworkRecipe make_recipe(NetworkVariant variant, double v_sq, double v_anti) {
  NetworkRecipe recipe;
  recipe.variant = variant;
  for (Quadrature q : expected_pattern(variant)) {
    recipe.squeezers.push_back(SqueezerSpec{v_sq, v_anti, q});
  }
  recipe.transmissivities =
      variant == NetworkVariant::epr ? std::vector<double>{0.5}
                                     : std::vector<double>{kGhzT1, kGhzT2};
  return recipe;
}

}  // namespace

NetworkRecipe NetworkRecipe::ghz_a(double v_sq, double v_anti) {
  return make_recipe(NetworkVariant::ghz_a, v_sq, v_anti);
}

NetworkRecipe NetworkRecipe::ghz_b(double v_sq, double v_anti) {
  return make_recipe(NetworkVariant::ghz_b, v_sq, v_anti);
}

NetworkRecipe NetworkRecipe::epr(double v_sq, double v_anti) {
  return make_recipe(NetworkVariant::epr, v_sq, v_anti);
}

void validate_recipe(const NetworkRecipe& recipe) {
  const auto pattern = expected_pattern(recipe.variant);
  if (recipe.squeezers.size() != pattern.size()) {
    throw std::invalid_argument("recipe: wrong squeezer count for variant");
  }
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (recipe.squeezers[i].squeezed_quadrature != pattern[i]) {
      throw std::invalid_argument("recipe: squeezer quadrature pattern does not match variant");
    }
  }
  const std::size_t n_bs = recipe.variant == NetworkVariant::epr ? 1 : 2;
  if (recipe.transmissivities.size() != n_bs) {
    throw std::invalid_argument("recipe: wrong transmissivity count for variant");
  }
  for (double t : recipe.transmissivities) {
    if (t < 0.0 || t > 1.0) {
      throw std::invalid_argument("recipe: transmissivity outside [0,1]");
    }
  }
}

std::vector<SymplecticOp> network_ops(const NetworkRecipe& recipe) {
  validate_recipe(recipe);
  std::vector<SymplecticOp> ops;
  if (recipe.variant == NetworkVariant::epr) {
    ops.push_back(on_modes(beam_splitter_op(recipe.transmissivities[0]), {0, 1}));
    return ops;
  }
  if (recipe.variant == NetworkVariant::ghz_b) {
    ops.push_back(on_modes(rotation_op(RotationKind::fourier), {0}));
  }
  ops.push_back(on_modes(beam_splitter_op(recipe.transmissivities[0]), {0, 1}));
  ops.push_back(on_modes(rotation_op(RotationKind::pi_rotation), {1}));
  ops.push_back(on_modes(beam_splitter_op(recipe.transmissivities[1]), {1, 2}));
  return ops;
}

namespace {

GaussianState build_from_recipe(const NetworkRecipe& recipe) {
  GaussianState state = squeezed_vacuum(recipe.squeezers[0]);
  for (std::size_t i = 1; i < recipe.squeezers.size(); ++i) {
    state = tensor(state, squeezed_vacuum(recipe.squeezers[i]));
  }
  for (const auto& op : network_ops(recipe)) {
    state = apply(op, state);
  }
  return state;
}

}  // namespace

GaussianState build_ghz(const NetworkRecipe& recipe) {
  if (recipe.variant == NetworkVariant::epr) {
    throw std::invalid_argument("build_ghz: recipe is not a GHZ variant");
  }
  return build_from_recipe(recipe);
}

GaussianState build_epr(const NetworkRecipe& recipe) {
  if (recipe.variant != NetworkVariant::epr) {
    throw std::invalid_argument("build_epr: recipe is not the EPR variant");
  }
  return build_from_recipe(recipe);
}

NetworkMatrix network_matrix(NetworkVariant variant) {
  if (variant == NetworkVariant::epr) {
    throw std::invalid_argument("network_matrix: defined for GHZ variants only");
  }
  using std::sqrt;
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix3cd u;
  u << sqrt(2.0 / 3.0), sqrt(1.0 / 3.0), 0.0,
      -sqrt(1.0 / 6.0), sqrt(1.0 / 3.0), sqrt(0.5),
      -sqrt(1.0 / 6.0), sqrt(1.0 / 3.0), -sqrt(0.5);
  if (variant == NetworkVariant::ghz_b) {
    u.col(0) *= i;
  }

  // Mode-space factors of the splitter decomposition; their product must
  // reproduce the literal matrix, which fixes the rotation sign conventions.
  auto bs3 = [](double t, int k, int l) {
    Eigen::Matrix3cd b = Eigen::Matrix3cd::Identity();
    b(k, k) = sqrt(1.0 - t);
    b(k, l) = sqrt(t);
    b(l, k) = sqrt(t);
    b(l, l) = -sqrt(1.0 - t);
    return b;
  };
  Eigen::Matrix3cd product = bs3(kGhzT2, 1, 2);
  Eigen::Matrix3cd rot = Eigen::Matrix3cd::Identity();
  rot(1, 1) = -1.0;  // 180-degree rotation on mode 2
  product = product * rot * bs3(kGhzT1, 0, 1);
  if (variant == NetworkVariant::ghz_b) {
    Eigen::Matrix3cd fourier = Eigen::Matrix3cd::Identity();
    fourier(0, 0) = i;
    product = product * fourier;
  }
  if ((product - u).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw std::logic_error("network_matrix: decomposition does not reproduce the literal matrix");
  }

  // Quadrature map: each mode-space entry u_jk becomes the 2x2 block
  // [[Re, -Im], [Im, Re]] acting on (x_k, p_k).
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(6, 6);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      s(2 * r, 2 * c) = u(r, c).real();
      s(2 * r, 2 * c + 1) = -u(r, c).imag();
      s(2 * r + 1, 2 * c) = u(r, c).imag();
      s(2 * r + 1, 2 * c + 1) = u(r, c).real();
    }
  }
  return NetworkMatrix{u, s};
}

std::vector<std::pair<std::string, double>> correlation_report(
    const GaussianState& state, CorrelationKind kind) {
  std::vector<std::pair<std::string, double>> report;
  const auto x = Quadrature::amplitude;
  const auto p = Quadrature::phase;
  if (kind == CorrelationKind::ghz3) {
    if (state.n_modes != 3) {
      throw std::invalid_argument("correlation_report: ghz3 expects a 3-mode state");
    }
    auto dx = [&](int a, int b) {
      return combination_variance(
          state, quadrature_combination(3, {{a, x, 1.0}, {b, x, -1.0}}));
    };
    report.emplace_back("var(x1-x2)", dx(0, 1));
    report.emplace_back("var(x2-x3)", dx(1, 2));
    report.emplace_back("var(x1-x3)", dx(0, 2));
    report.emplace_back(
        "var(p1+p2+p3)",
        combination_variance(
            state, quadrature_combination(3, {{0, p, 1.0}, {1, p, 1.0}, {2, p, 1.0}})));
  } else {
    if (state.n_modes != 2) {
      throw std::invalid_argument("correlation_report: epr expects a 2-mode state");
    }
    report.emplace_back(
        "var(x1-x2)",
        combination_variance(state, quadrature_combination(2, {{0, x, 1.0}, {1, x, -1.0}})));
    report.emplace_back(
        "var(p1+p2)",
        combination_variance(state, quadrature_combination(2, {{0, p, 1.0}, {1, p, 1.0}})));
  }
  return report;
}

}  // namespace cvswap
