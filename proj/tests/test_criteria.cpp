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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cvswap/criteria.hpp"
#include "cvswap/io.hpp"
#include "cvswap/protocol.hpp"

using namespace cvswap;

namespace {

constexpr auto kX = Quadrature::amplitude;
constexpr auto kP = Quadrature::phase;

GaussianState swap_output_threemode(double v, double w, double gain, double eta) {
  return swap_ghz_epr(build_ghz(NetworkRecipe::ghz_a(v, w)),
                      build_epr(NetworkRecipe::epr(v, w)), gain, ChannelSpec{eta});
}

// Combo variances as functionals of the gains, for the minimizer oracle.
auto v2_functional(const GaussianState& state) {
  return [&state](const Eigen::VectorXd& g) {
    return combination_variance(
        state, quadrature_combination(
                   4, {{0, kP, 1.0}, {1, kP, 1.0}, {2, kP, g(0)}, {3, kP, g(1)}}));
  };
}

auto v4_functional(const GaussianState& state) {
  return [&state](const Eigen::VectorXd& g) {
    return combination_variance(
        state, quadrature_combination(
                   4, {{0, kP, g(0)}, {1, kP, 1.0}, {2, kP, 1.0}, {3, kP, g(1)}}));
  };
}

auto v6_functional(const GaussianState& state) {
  return [&state](const Eigen::VectorXd& g) {
    return combination_variance(
        state, quadrature_combination(
                   4, {{0, kP, g(0)}, {1, kP, g(1)}, {2, kP, 1.0}, {3, kP, 1.0}}));
  };
}

}  // namespace

TEST_CASE("closed-form gains at the experimental squeezing") {
  const ComboGains g6 = closedform_gains_fourmode(0.26, 9.64);
  REQUIRE(g6.g.size() == 6);
  // Two-decimal reference values: 0.90, 0.84, 0.94, 0.94, 0.88, 0.88.
  CHECK(std::abs(g6.g[0] - 0.90) <= 0.01);
  CHECK(std::abs(g6.g[1] - 0.84) <= 0.01);
  CHECK(std::abs(g6.g[2] - 0.94) <= 0.01);
  CHECK(std::abs(g6.g[3] - 0.94) <= 0.01);
  CHECK(std::abs(g6.g[4] - 0.88) <= 0.01);
  CHECK(std::abs(g6.g[5] - 0.88) <= 0.01);
  CHECK(g6.g[2] == g6.g[3]);
  CHECK(g6.g[4] == g6.g[5]);

  const ComboGains g78 = closedform_gains_threemode(0.26, 9.64);
  REQUIRE(g78.g.size() == 2);
  CHECK(std::abs(g78.g[0] - 0.94) <= 0.01);
  CHECK(std::abs(g78.g[1] - 0.93) <= 0.01);

  // No squeezing leaves nothing to cancel.
  for (double g : closedform_gains_fourmode(1.0, 1.0).g) {
    CHECK(g == 0.0);
  }
  for (double g : closedform_gains_threemode(1.0, 1.0).g) {
    CHECK(g == 0.0);
  }
}

TEST_CASE("numeric gain search reproduces the closed forms") {
  const double v = 0.26;
  const double w = 9.64;
  const double gain = optimal_classical_gain(v, w);
  const Eigen::VectorXd lo2 = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd hi2 = Eigen::VectorXd::Constant(2, 1.2);

  const GaussianState four = swap_ghz_ghz(build_ghz(NetworkRecipe::ghz_a(v, w)),
                                          build_ghz(NetworkRecipe::ghz_b(v, w)), gain);
  const ComboGains g6 = closedform_gains_fourmode(v, w);

  const Eigen::VectorXd m2 = numeric_gain_search(v2_functional(four), lo2, hi2);
  CHECK(std::abs(m2(0) - g6.g[0]) < 1e-8);
  CHECK(std::abs(m2(1) - g6.g[1]) < 1e-8);

  const Eigen::VectorXd m4 = numeric_gain_search(v4_functional(four), lo2, hi2);
  CHECK(std::abs(m4(0) - g6.g[2]) < 1e-8);
  CHECK(std::abs(m4(1) - g6.g[3]) < 1e-8);

  const Eigen::VectorXd m6 = numeric_gain_search(v6_functional(four), lo2, hi2);
  CHECK(std::abs(m6(0) - g6.g[4]) < 1e-8);
  CHECK(std::abs(m6(1) - g6.g[5]) < 1e-8);

  const GaussianState three = swap_output_threemode(v, w, gain, 1.0);
  const ComboGains g78 = closedform_gains_threemode(v, w);
  const Eigen::VectorXd lo1 = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd hi1 = Eigen::VectorXd::Constant(1, 1.2);
  const Eigen::VectorXd m7 = numeric_gain_search(
      [&three](const Eigen::VectorXd& g) {
        return combination_variance(
            three, quadrature_combination(3, {{0, kP, 1.0}, {1, kP, 1.0}, {2, kP, g(0)}}));
      },
      lo1, hi1);
  CHECK(std::abs(m7(0) - g78.g[0]) < 1e-8);
  const Eigen::VectorXd m8 = numeric_gain_search(
      [&three](const Eigen::VectorXd& g) {
        return combination_variance(
            three, quadrature_combination(3, {{0, kP, g(0)}, {1, kP, 1.0}, {2, kP, 1.0}}));
      },
      lo1, hi1);
  CHECK(std::abs(m8(0) - g78.g[1]) < 1e-8);
}

TEST_CASE("numeric gain search over a random squeezing grid") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> rdist(0.05, 1.1);
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -0.5);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const double r = rdist(rng);
    const double v = std::exp(-2.0 * r);
    const double w = std::exp(2.0 * r);
    const double gain = optimal_classical_gain(v, w);
    const GaussianState four = swap_ghz_ghz(build_ghz(NetworkRecipe::ghz_a(v, w)),
                                            build_ghz(NetworkRecipe::ghz_b(v, w)), gain);
    const ComboGains g6 = closedform_gains_fourmode(v, w);
    const Eigen::VectorXd m2 = numeric_gain_search(v2_functional(four), lo, hi);
    CHECK(std::abs(m2(0) - g6.g[0]) < 1e-6);
    CHECK(std::abs(m2(1) - g6.g[1]) < 1e-6);
  }
}

TEST_CASE("numeric gain search rejects singular systems") {
  CHECK_THROWS_AS(numeric_gain_search([](const Eigen::VectorXd& g) { return g(0); },
                                      Eigen::VectorXd::Zero(1),
                                      Eigen::VectorXd::Ones(1)),
                  std::runtime_error);
}

TEST_CASE("combo criteria on the vacuum boundary") {
  const CriterionResult four =
      fourmode_combos(vacuum_state(4), ComboGains{{0, 0, 0, 0, 0, 0}});
  for (double combo : four.combos) {
    CHECK(combo == doctest::Approx(4.0).epsilon(1e-12));
  }
  CHECK_FALSE(four.entangled());

  const CriterionResult three = threemode_combos(vacuum_state(3), ComboGains{{0, 0}});
  for (double combo : three.combos) {
    CHECK(combo == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("combo criteria at the experimental point") {
  const double v = 0.26;
  const double w = 9.64;
  const GaussianState four = swap_ghz_ghz(build_ghz(NetworkRecipe::ghz_a(v, w)),
                                          build_ghz(NetworkRecipe::ghz_b(v, w)), 0.95);
  // Same two-decimal gains the measured-combo comparison uses.
  const CriterionResult c4 =
      fourmode_combos(four, ComboGains{{0.90, 0.84, 0.94, 0.94, 0.88, 0.88}});
  CHECK(c4.entangled());
  CHECK(std::abs(c4.combos[0] - 2.10) < 0.5);
  CHECK(std::abs(c4.combos[1] - 2.65) < 0.5);
  CHECK(std::abs(c4.combos[2] - 2.06) < 0.5);

  const GaussianState three = swap_output_threemode(v, w, 0.95, 1.0);
  const CriterionResult c3 = threemode_combos(three, ComboGains{{0.94, 0.93}});
  CHECK(c3.entangled());
  CHECK(std::abs(c3.combos[0] - 2.27) < 0.5);
  CHECK(std::abs(c3.combos[1] - 1.85) < 0.5);

  // The GHZ resource state itself at unit gains: 2V + 3V.
  const CriterionResult direct =
      threemode_combos(build_ghz(NetworkRecipe::ghz_a(v, 1.0 / v)), ComboGains{{1.0, 1.0}});
  CHECK(direct.combos[0] == doctest::Approx(1.30).epsilon(1e-12));
  CHECK(direct.combos[1] == doctest::Approx(1.30).epsilon(1e-12));
}

TEST_CASE("optimal gains never lose to unit gains") {
  for (double r : {0.15, 0.44, 0.8}) {
    const double v = std::exp(-2.0 * r);
    const double w = std::exp(2.0 * r);
    const double gain = optimal_classical_gain(v, w);
    const GaussianState four = swap_ghz_ghz(build_ghz(NetworkRecipe::ghz_a(v, w)),
                                            build_ghz(NetworkRecipe::ghz_b(v, w)), gain);
    const auto opt = fourmode_combos(four, closedform_gains_fourmode(v, w)).combos;
    const auto unit = fourmode_combos(four, ComboGains{{1, 1, 1, 1, 1, 1}}).combos;
    for (std::size_t i = 0; i < opt.size(); ++i) {
      CHECK(opt[i] <= unit[i] + 1e-12);
    }

    const GaussianState three = swap_output_threemode(v, w, gain, 1.0);
    const auto opt3 = threemode_combos(three, closedform_gains_threemode(v, w)).combos;
    const auto unit3 = threemode_combos(three, ComboGains{{1, 1}}).combos;
    CHECK(opt3[0] <= unit3[0] + 1e-12);
    CHECK(opt3[1] <= unit3[1] + 1e-12);
  }
}

TEST_CASE("partial transpose is an involution") {
  const GaussianState state = swap_output_threemode(0.26, 9.64, 0.85, 0.7);
  for (int k = 0; k < 3; ++k) {
    const Eigen::MatrixXd twice = partial_transpose(partial_transpose(state.cov, k), k);
    CHECK((twice - state.cov).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("ppt values of simple states") {
  const PptReport vac = ppt_values(vacuum_state(3));
  for (int k = 0; k < 3; ++k) {
    CHECK(vac.mu[k] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(vac.inseparable(k));
  }

  // Pure product states sit exactly on the separability edge.
  const GaussianState product =
      tensor(tensor(squeezed_vacuum(SqueezerSpec::pure(0.3, kX)),
                    squeezed_vacuum(SqueezerSpec::pure(0.7, kP))),
             squeezed_vacuum(SqueezerSpec::pure(1.1, kX)));
  const PptReport prod = ppt_values(product);
  for (int k = 0; k < 3; ++k) {
    CHECK(prod.mu[k] == doctest::Approx(1.0).epsilon(1e-9));
  }

  CHECK_THROWS_AS(ppt_values(vacuum_state(4)), std::invalid_argument);
}

TEST_CASE("ppt regression on the bundled covariance files") {
  struct Expected {
    const char* file;
    double mu[3];
  };
  const Expected table[] = {
      {"data/sigma1.json", {0.52, 0.39, 0.40}},
      {"data/sigma2.json", {0.61, 0.42, 0.42}},
      {"data/sigma3.json", {0.74, 0.50, 0.50}},
      {"data/sigma4.json", {0.86, 0.58, 0.56}},
      {"data/sigma5.json", {1.03, 0.70, 0.66}},
  };
  for (const auto& expected : table) {
    const GaussianState state = load_covariance_file(expected.file);
    const PptReport report = ppt_values(state);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(report.mu[k] - expected.mu[k]) <= 0.01);
    }
  }
  // The strongest-loss point is separable across D1|D2D3 and only there.
  const PptReport worst = ppt_values(load_covariance_file("data/sigma5.json"));
  CHECK_FALSE(worst.inseparable(0));
  CHECK(worst.inseparable(1));
  CHECK(worst.inseparable(2));

  // The measured matrices themselves satisfy the uncertainty relation.
  for (const auto& expected : table) {
    CHECK(is_physical(load_covariance_file(expected.file)));
  }
}

TEST_CASE("measurement synthesis and reconstruction round-trip") {
  SUBCASE("bundled experimental matrix") {
    const GaussianState sigma1 = load_covariance_file("data/sigma1.json");
    const GaussianState rebuilt = reconstruct_covariance(synthesize_measurements(sigma1));
    CHECK((rebuilt.cov - sigma1.cov).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("vacuum set gives the identity") {
    MeasurementSet m;
    for (int i = 0; i < 3; ++i) {
      m.var_x[i] = 1.0;
      m.var_p[i] = 1.0;
    }
    for (int k = 0; k < 3; ++k) {
      m.xx_diff[k] = 2.0;
      m.pp_sum[k] = 2.0;
    }
    for (int k = 0; k < 6; ++k) {
      m.xp_sum[k] = 2.0;
    }
    CHECK(reconstruct_covariance(m).cov.isApprox(Eigen::MatrixXd::Identity(6, 6), 1e-14));
  }
  SUBCASE("random simulated swaps") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> rdist(0.02, 1.0);
    std::uniform_real_distribution<double> gdist(0.0, 1.3);
    std::uniform_real_distribution<double> edist(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const double v = std::exp(-2.0 * rdist(rng));
      const GaussianState state =
          swap_output_threemode(v, 1.0 / v, gdist(rng), edist(rng));
      const GaussianState rebuilt = reconstruct_covariance(synthesize_measurements(state));
      CHECK((rebuilt.cov - state.cov).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("missing entries are rejected") {
    const GaussianState sigma1 = load_covariance_file("data/sigma1.json");
    MeasurementSet m = synthesize_measurements(sigma1);
    m.pp_sum[1].reset();
    CHECK_THROWS_AS(reconstruct_covariance(m), std::invalid_argument);
  }
}

TEST_CASE("measurement set JSON round-trip") {
  const GaussianState state = swap_output_threemode(0.26, 9.64, 0.85, 0.8);
  const MeasurementSet m = synthesize_measurements(state);
  const MeasurementSet parsed =
      measurement_set_from_json_text(measurement_set_to_json(m).dump());
  const GaussianState a = reconstruct_covariance(m);
  const GaussianState b = reconstruct_covariance(parsed);
  CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("squeezing thresholds") {
  const double four_unit = squeezing_threshold(CriterionKind::fourmode, GainPolicy::unit);
  CHECK(std::abs(four_unit - 0.44) <= 0.005);

  const double three_unit = squeezing_threshold(CriterionKind::threemode, GainPolicy::unit);
  CHECK(std::abs(three_unit - 0.39) <= 0.005);

  CHECK(squeezing_threshold(CriterionKind::fourmode, GainPolicy::optimal) == 0.0);
  CHECK(squeezing_threshold(CriterionKind::threemode, GainPolicy::optimal) == 0.0);
}

TEST_CASE("loss threshold") {
  const LossThreshold t = loss_threshold(0.26, 9.64, 0.85);
  CHECK(t.status == LossThreshold::Status::crossing);
  CHECK(std::abs(t.eta_star - 0.24) <= 0.02);

  const LossThreshold vac = loss_threshold(1.0, 1.0, 0.0);
  CHECK(vac.status == LossThreshold::Status::never_entangled);

  // At -10.9 dB pure squeezing the D2|D1D3 and D3|D1D2 splittings stay
  // inseparable even at full loss; the D1 splitting still needs the channel.
  const double v = std::pow(10.0, -1.09);
  const GaussianState dark = swap_output_threemode(v, 1.0 / v, 0.85, 0.0);
  const PptReport ppt = ppt_values(dark);
  CHECK(ppt.mu[0] >= 1.0);
  CHECK(ppt.mu[1] < 1.0);
  CHECK(ppt.mu[2] < 1.0);
}

TEST_CASE("ppt monotone in channel efficiency") {
  const GaussianState ghz = build_ghz(NetworkRecipe::ghz_a(0.26, 9.64));
  const GaussianState epr = build_epr(NetworkRecipe::epr(0.26, 9.64));
  std::array<double, 3> last{1e9, 1e9, 1e9};
  for (int i = 0; i <= 100; ++i) {
    const double eta = 0.01 * i;
    const PptReport ppt =
        ppt_values(swap_ghz_epr(ghz, epr, 0.85, ChannelSpec{eta}));
    for (int k = 0; k < 3; ++k) {
      CHECK(ppt.mu[k] <= last[k] + 1e-9);
      last[k] = ppt.mu[k];
    }
  }
}
