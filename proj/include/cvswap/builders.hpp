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

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cvswap/gaussian.hpp"

namespace cvswap {

enum class NetworkVariant { ghz_a, ghz_b, epr };

/// Recipe for one of the entangled resource states. GHZ networks take three
/// squeezers and two beam splitters (T1 = 1/3, T2 = 1/2 by default); the EPR
/// source takes two squeezers on a single balanced splitter. The squeezed
/// quadrature pattern is fixed per variant:
///   ghz_a: (amplitude, phase, amplitude)
///   ghz_b: (phase, phase, amplitude)
///   epr:   (phase, amplitude)
struct NetworkRecipe {
  NetworkVariant variant = NetworkVariant::ghz_a;
  std::vector<SqueezerSpec> squeezers;
  std::vector<double> transmissivities;

  static NetworkRecipe ghz_a(double v_sq, double v_anti);
  static NetworkRecipe ghz_b(double v_sq, double v_anti);
  static NetworkRecipe epr(double v_sq, double v_anti);
};

/// Validates counts, transmissivities and the squeezed-quadrature pattern.
void validate_recipe(const NetworkRecipe& recipe);

/// Ordered op sequence realizing the recipe's linear network (first op acts
/// first). Complex network entries are realized as the Fourier rotation on
/// mode 1, so the state path stays in real arithmetic.
std::vector<SymplecticOp> network_ops(const NetworkRecipe& recipe);

/// Three-mode GHZ resource state built by the recipe's splitter network.
GaussianState build_ghz(const NetworkRecipe& recipe);

/// Two-mode EPR state: modes (b1 +/- b2)/sqrt(2).
GaussianState build_epr(const NetworkRecipe& recipe);

struct NetworkMatrix {
  Eigen::Matrix3cd unitary;     // literal mode-space matrix
  Eigen::MatrixXd symplectic;   // equivalent 6x6 real quadrature map
};

/// The literal 3x3 network matrix for a GHZ variant. Throws if the product
/// of the decomposition factors deviates from the literal matrix by more
/// than 1e-12 (this pins the rotation conventions).
NetworkMatrix network_matrix(NetworkVariant variant);

enum class CorrelationKind { ghz3, epr };

/// Named correlation variances: for ghz3 the three pairwise x-differences
/// and the total p-sum; for epr the x-difference and p-sum.
std::vector<std::pair<std::string, double>> correlation_report(
    const GaussianState& state, CorrelationKind kind);

}  // namespace cvswap
