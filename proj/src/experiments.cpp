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

#include "cvswap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvswap/builders.hpp"
#include "cvswap/criteria.hpp"
#include "cvswap/protocol.hpp"

namespace cvswap {

namespace {

constexpr auto kX = Quadrature::amplitude;
constexpr auto kP = Quadrature::phase;

// Classical gain used for the PPT loss experiments when none is configured;
// it keeps the D1|D2D3 splitting inseparable deepest into the lossy region.
constexpr double kDefaultPptGain = 0.85;

const std::vector<std::pair<std::string, std::string>>& experiment_table() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"swap_ghz_ghz", "swap between two tripartite GHZ states"},
      {"swap_ghz_epr", "swap between a GHZ state and an EPR state over a lossy channel"},
      {"sweep_loss", "PPT values of the GHZ x EPR output against channel efficiency"},
      {"ppt_file", "PPT report for a covariance matrix file"},
      {"thresholds", "squeezing and loss thresholds for entanglement"},
      {"tomography_roundtrip", "18-measurement reconstruction of a simulated output"},
  };
  return table;
}

bool known_experiment(const std::string& name) {
  for (const auto& [key, help] : experiment_table()) {
    if (key == name) {
      return true;
    }
  }
  return false;
}

double resolve_gain(const ExperimentConfig& c, bool ppt_experiment) {
  if (c.gain.has_value()) {
    return *c.gain;
  }
  if (c.gain_optimal || !ppt_experiment) {
    return optimal_classical_gain(c.v_sq, c.v_anti);
  }
  return kDefaultPptGain;
}

void require_physical(const GaussianState& state, const char* where) {
  if (!is_physical(state)) {
    throw NumericalError(std::string(where) + ": non-physical state encountered");
  }
}

std::string combo_verdict(const std::vector<double>& combos, double boundary) {
  const double top = *std::max_element(combos.begin(), combos.end());
  if (top > boundary + kPhysicalSlack) {
    return "separable";
  }
  if (top >= boundary - kPhysicalSlack) {
    return "separable (boundary)";
  }
  return "entangled";
}

std::string ppt_verdict(double mu) {
  if (mu < 1.0 - kPhysicalSlack) {
    return "inseparable";
  }
  if (mu <= 1.0 + kPhysicalSlack) {
    return "boundary";
  }
  return "separable";
}

double to_db(double variance, double vacuum) {
  return 10.0 * std::log10(variance / vacuum);
}

Json correlation_entry(const std::string& name, const GaussianState& state,
                       const Eigen::VectorXd& coeffs) {
  const double variance = combination_variance(state, coeffs);
  const double vacuum = coeffs.squaredNorm();  // unit variance per quadrature
  Json entry = Json::object();
  entry.set("name", Json::string(name));
  entry.set("variance", Json::number(variance));
  entry.set("vacuum_variance", Json::number(vacuum));
  entry.set("db", Json::number(to_db(variance, vacuum)));
  return entry;
}

Json ppt_to_json(const PptReport& report) {
  static const char* splitting_names[3] = {"D1|D2D3", "D2|D1D3", "D3|D1D2"};
  Json ppt = Json::object();
  Json mu = Json::array();
  for (double m : report.mu) {
    mu.push(Json::number(m));
  }
  ppt.set("mu", std::move(mu));
  ppt.set("boundary", Json::number(report.boundary));
  Json splittings = Json::array();
  for (int k = 0; k < 3; ++k) {
    Json s = Json::object();
    s.set("splitting", Json::string(splitting_names[k]));
    s.set("mu", Json::number(report.mu[k]));
    s.set("verdict", Json::string(ppt_verdict(report.mu[k])));
    splittings.push(std::move(s));
  }
  ppt.set("splittings", std::move(splittings));
  return ppt;
}

Json run_swap_ghz_ghz(const ExperimentConfig& cfg) {
  const double v = cfg.v_sq;
  const double w = cfg.v_anti;
  const double gain = resolve_gain(cfg, false);
  const ComboGains gains = closedform_gains_fourmode(v, w);
  const auto& g = gains.g;

  const GaussianState state = swap_ghz_ghz(build_ghz(NetworkRecipe::ghz_a(v, w)),
                                           build_ghz(NetworkRecipe::ghz_b(v, w)), gain);
  require_physical(state, "swap_ghz_ghz");

  Json parameters = Json::object();
  parameters.set("v_sq", Json::number(v));
  parameters.set("v_anti", Json::number(w));
  parameters.set("gain", Json::number(gain));
  Json gj = Json::object();
  for (int i = 0; i < 6; ++i) {
    gj.set("g" + std::to_string(i + 1), Json::number(g[i]));
  }
  parameters.set("combo_gains", std::move(gj));

  Json correlations = Json::array();
  correlations.push(correlation_entry(
      "var(x_C1-x_C2)", state,
      quadrature_combination(4, {{0, kX, 1.0}, {1, kX, -1.0}})));
  correlations.push(correlation_entry(
      "var(p_C1+p_C2+g1*p_C3+g2*p_C4)", state,
      quadrature_combination(4, {{0, kP, 1.0}, {1, kP, 1.0}, {2, kP, g[0]}, {3, kP, g[1]}})));
  correlations.push(correlation_entry(
      "var(x_C2-x_C3)", state,
      quadrature_combination(4, {{1, kX, 1.0}, {2, kX, -1.0}})));
  correlations.push(correlation_entry(
      "var(g3*p_C1+p_C2+p_C3+g4*p_C4)", state,
      quadrature_combination(4, {{0, kP, g[2]}, {1, kP, 1.0}, {2, kP, 1.0}, {3, kP, g[3]}})));
  correlations.push(correlation_entry(
      "var(x_C3-x_C4)", state,
      quadrature_combination(4, {{2, kX, 1.0}, {3, kX, -1.0}})));
  correlations.push(correlation_entry(
      "var(g5*p_C1+g6*p_C2+p_C3+p_C4)", state,
      quadrature_combination(4, {{0, kP, g[4]}, {1, kP, g[5]}, {2, kP, 1.0}, {3, kP, 1.0}})));

  const CriterionResult criteria = fourmode_combos(state, gains);
  Json crit = Json::object();
  Json combos = Json::array();
  for (double c : criteria.combos) {
    combos.push(Json::number(c));
  }
  crit.set("combos", std::move(combos));
  crit.set("boundary", Json::number(criteria.boundary));
  crit.set("verdict", Json::string(combo_verdict(criteria.combos, criteria.boundary)));

  Json report = Json::object();
  report.set("experiment", Json::string("swap_ghz_ghz"));
  report.set("parameters", std::move(parameters));
  report.set("correlations", std::move(correlations));
  report.set("criteria", std::move(crit));
  return report;
}

Json run_swap_ghz_epr(const ExperimentConfig& cfg) {
  const double v = cfg.v_sq;
  const double w = cfg.v_anti;
  const double gain = resolve_gain(cfg, false);
  const double eta = cfg.eta.value_or(1.0);
  const ComboGains gains = closedform_gains_threemode(v, w);
  const double g7 = gains.g[0];
  const double g8 = gains.g[1];

  const GaussianState state =
      swap_ghz_epr(build_ghz(NetworkRecipe::ghz_a(v, w)),
                   build_epr(NetworkRecipe::epr(v, w)), gain, ChannelSpec{eta});
  require_physical(state, "swap_ghz_epr");

  Json parameters = Json::object();
  parameters.set("v_sq", Json::number(v));
  parameters.set("v_anti", Json::number(w));
  parameters.set("gain", Json::number(gain));
  parameters.set("eta", Json::number(eta));
  parameters.set("g7", Json::number(g7));
  parameters.set("g8", Json::number(g8));

  Json correlations = Json::array();
  correlations.push(correlation_entry(
      "var(x_D1-x_D2)", state,
      quadrature_combination(3, {{0, kX, 1.0}, {1, kX, -1.0}})));
  correlations.push(correlation_entry(
      "var(p_D1+p_D2+g7*p_D3)", state,
      quadrature_combination(3, {{0, kP, 1.0}, {1, kP, 1.0}, {2, kP, g7}})));
  correlations.push(correlation_entry(
      "var(x_D2-x_D3)", state,
      quadrature_combination(3, {{1, kX, 1.0}, {2, kX, -1.0}})));
  correlations.push(correlation_entry(
      "var(g8*p_D1+p_D2+p_D3)", state,
      quadrature_combination(3, {{0, kP, g8}, {1, kP, 1.0}, {2, kP, 1.0}})));

  const CriterionResult criteria = threemode_combos(state, gains);
  Json crit = Json::object();
  Json combos = Json::array();
  for (double c : criteria.combos) {
    combos.push(Json::number(c));
  }
  crit.set("combos", std::move(combos));
  crit.set("boundary", Json::number(criteria.boundary));
  crit.set("verdict", Json::string(combo_verdict(criteria.combos, criteria.boundary)));

  Json report = Json::object();
  report.set("experiment", Json::string("swap_ghz_epr"));
  report.set("parameters", std::move(parameters));
  report.set("correlations", std::move(correlations));
  report.set("criteria", std::move(crit));
  report.set("ppt", ppt_to_json(ppt_values(state)));
  return report;
}

Json sweep_row(double eta, const PptReport& ppt, bool boundary) {
  Json row = Json::object();
  row.set("eta", Json::number(eta));
  row.set("ppt_d1", Json::number(ppt.mu[0]));
  row.set("ppt_d2", Json::number(ppt.mu[1]));
  row.set("ppt_d3", Json::number(ppt.mu[2]));
  const double top = *std::max_element(ppt.mu.begin(), ppt.mu.end());
  row.set("entangled", Json::boolean(top < 1.0));
  row.set("boundary", Json::boolean(boundary));
  return row;
}

Json run_sweep_loss(const ExperimentConfig& cfg) {
  const double v = cfg.v_sq;
  const double w = cfg.v_anti;
  const double gain = resolve_gain(cfg, true);
  const SweepSpec sweep = cfg.eta_sweep.value_or(SweepSpec{});
  if (sweep.step <= 0.0) {
    throw ConfigError("sweep_loss: step must be positive");
  }
  if (sweep.start < 0.0 || sweep.stop > 1.0 || sweep.start > sweep.stop) {
    throw ConfigError("sweep_loss: sweep range must satisfy 0 <= start <= stop <= 1");
  }

  const GaussianState ghz = build_ghz(NetworkRecipe::ghz_a(v, w));
  const GaussianState epr = build_epr(NetworkRecipe::epr(v, w));
  auto ppt_at = [&](double eta) {
    const GaussianState state = swap_ghz_epr(ghz, epr, gain, ChannelSpec{eta});
    require_physical(state, "sweep_loss");
    return ppt_values(state);
  };

  std::vector<std::pair<double, PptReport>> points;
  for (int i = 0;; ++i) {
    const double eta = sweep.start + i * sweep.step;
    if (eta > sweep.stop + 1e-12) {
      break;
    }
    points.emplace_back(std::min(eta, sweep.stop), ppt_at(std::min(eta, sweep.stop)));
  }

  const LossThreshold threshold = loss_threshold(v, w, gain);

  Json rows = Json::array();
  bool boundary_emitted = false;
  for (const auto& [eta, ppt] : points) {
    if (threshold.status == LossThreshold::Status::crossing && !boundary_emitted &&
        eta > threshold.eta_star) {
      rows.push(sweep_row(threshold.eta_star, ppt_at(threshold.eta_star), true));
      boundary_emitted = true;
    }
    rows.push(sweep_row(eta, ppt, false));
  }
  if (threshold.status == LossThreshold::Status::crossing && !boundary_emitted) {
    rows.push(sweep_row(threshold.eta_star, ppt_at(threshold.eta_star), true));
  }

  Json parameters = Json::object();
  parameters.set("v_sq", Json::number(v));
  parameters.set("v_anti", Json::number(w));
  parameters.set("gain", Json::number(gain));
  Json sweep_json = Json::object();
  sweep_json.set("start", Json::number(sweep.start));
  sweep_json.set("stop", Json::number(sweep.stop));
  sweep_json.set("step", Json::number(sweep.step));
  parameters.set("eta_sweep", std::move(sweep_json));

  Json threshold_json = Json::object();
  switch (threshold.status) {
    case LossThreshold::Status::crossing:
      threshold_json.set("status", Json::string("crossing"));
      threshold_json.set("eta_star", Json::number(threshold.eta_star));
      break;
    case LossThreshold::Status::entangled_everywhere:
      threshold_json.set("status", Json::string("entangled_everywhere"));
      break;
    case LossThreshold::Status::never_entangled:
      threshold_json.set("status", Json::string("never_entangled"));
      break;
  }

  Json report = Json::object();
  report.set("experiment", Json::string("sweep_loss"));
  report.set("parameters", std::move(parameters));
  report.set("threshold", std::move(threshold_json));
  report.set("rows", std::move(rows));
  return report;
}

Json run_ppt_file(const ExperimentConfig& cfg) {
  if (cfg.input_path.empty()) {
    throw ConfigError("ppt_file: no input covariance file configured");
  }
  GaussianState state;
  try {
    state = load_covariance_file(cfg.input_path);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (state.n_modes != 3) {
    throw ConfigError("ppt_file: expected a 3-mode covariance matrix");
  }
  Json report = Json::object();
  report.set("experiment", Json::string("ppt_file"));
  report.set("input", Json::string(cfg.input_path));
  report.set("n_modes", Json::integer(state.n_modes));
  report.set("ppt", ppt_to_json(ppt_values(state)));
  return report;
}

Json run_thresholds(const ExperimentConfig& cfg) {
  const double v = cfg.v_sq;
  const double w = cfg.v_anti;
  const double gain = resolve_gain(cfg, true);
  constexpr double tol_r = 1e-4;
  constexpr double tol_eta = 1e-4;

  Json rows = Json::array();
  auto add_row = [&](const char* criterion, const char* policy, double r_star) {
    Json row = Json::object();
    row.set("criterion", Json::string(criterion));
    row.set("gain_policy", Json::string(policy));
    row.set("r_star", Json::number(r_star));
    row.set("squeezing_db", Json::number(10.0 * std::log10(std::exp(-2.0 * r_star))));
    row.set("tolerance", Json::number(tol_r));
    rows.push(std::move(row));
  };
  add_row("fourmode", "unit",
          squeezing_threshold(CriterionKind::fourmode, GainPolicy::unit, tol_r));
  add_row("fourmode", "optimal",
          squeezing_threshold(CriterionKind::fourmode, GainPolicy::optimal, tol_r));
  add_row("threemode", "unit",
          squeezing_threshold(CriterionKind::threemode, GainPolicy::unit, tol_r));
  add_row("threemode", "optimal",
          squeezing_threshold(CriterionKind::threemode, GainPolicy::optimal, tol_r));

  const LossThreshold loss = loss_threshold(v, w, gain, tol_eta);
  Json loss_json = Json::object();
  loss_json.set("v_sq", Json::number(v));
  loss_json.set("v_anti", Json::number(w));
  loss_json.set("gain", Json::number(gain));
  switch (loss.status) {
    case LossThreshold::Status::crossing:
      loss_json.set("status", Json::string("crossing"));
      loss_json.set("eta_star", Json::number(loss.eta_star));
      break;
    case LossThreshold::Status::entangled_everywhere:
      loss_json.set("status", Json::string("entangled_everywhere"));
      break;
    case LossThreshold::Status::never_entangled:
      loss_json.set("status", Json::string("never_entangled"));
      break;
  }
  loss_json.set("tolerance", Json::number(tol_eta));

  Json report = Json::object();
  report.set("experiment", Json::string("thresholds"));
  report.set("squeezing_thresholds", std::move(rows));
  report.set("loss_threshold", std::move(loss_json));
  return report;
}

Json run_tomography_roundtrip(const ExperimentConfig& cfg) {
  const double v = cfg.v_sq;
  const double w = cfg.v_anti;
  const double gain = resolve_gain(cfg, false);
  const double eta = cfg.eta.value_or(1.0);

  const GaussianState state =
      swap_ghz_epr(build_ghz(NetworkRecipe::ghz_a(v, w)),
                   build_epr(NetworkRecipe::epr(v, w)), gain, ChannelSpec{eta});
  require_physical(state, "tomography_roundtrip");

  const MeasurementSet measurements = synthesize_measurements(state);
  const GaussianState rebuilt = reconstruct_covariance(measurements);
  const double max_error = (rebuilt.cov - state.cov).cwiseAbs().maxCoeff();

  Json parameters = Json::object();
  parameters.set("v_sq", Json::number(v));
  parameters.set("v_anti", Json::number(w));
  parameters.set("gain", Json::number(gain));
  parameters.set("eta", Json::number(eta));

  Json report = Json::object();
  report.set("experiment", Json::string("tomography_roundtrip"));
  report.set("parameters", std::move(parameters));
  report.set("measurements", measurement_set_to_json(measurements));
  report.set("reconstructed", covariance_to_json(rebuilt));
  report.set("max_abs_error", Json::number(max_error));
  report.set("round_trip_ok", Json::boolean(max_error < kAlgebraTol));
  return report;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config: top-level value must be an object");
  }
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      cfg.experiment = value.get<std::string>();
    } else if (key == "squeezer") {
      if (!value.is_object()) {
        throw ConfigError("config: field 'squeezer' must be an object");
      }
      if (value.contains("v_sq")) {
        cfg.v_sq = value.at("v_sq").get<double>();
        // A half-specified squeezer defaults to the pure partner variance.
        cfg.v_anti = value.contains("v_anti") ? value.at("v_anti").get<double>()
                                              : 1.0 / cfg.v_sq;
      } else if (value.contains("v_anti")) {
        cfg.v_anti = value.at("v_anti").get<double>();
      }
    } else if (key == "gain") {
      if (value.is_string()) {
        if (value.get<std::string>() != "optimal") {
          throw ConfigError("config: field 'gain' accepts a number or \"optimal\"");
        }
        cfg.gain_optimal = true;
      } else if (value.is_number()) {
        cfg.gain = value.get<double>();
      } else {
        throw ConfigError("config: field 'gain' accepts a number or \"optimal\"");
      }
    } else if (key == "eta") {
      if (value.is_object()) {
        SweepSpec sweep;
        sweep.start = value.value("start", 0.0);
        sweep.stop = value.value("stop", 1.0);
        sweep.step = value.value("step", 0.01);
        cfg.eta_sweep = sweep;
      } else if (value.is_number()) {
        cfg.eta = value.get<double>();
      } else {
        throw ConfigError("config: field 'eta' accepts a number or a sweep object");
      }
    } else if (key == "input") {
      cfg.input_path = value.get<std::string>();
    } else if (key == "output") {
      if (!value.is_object()) {
        throw ConfigError("config: field 'output' must be an object");
      }
      cfg.out_path = value.value("path", std::string());
      const std::string format = value.value("format", std::string("json"));
      if (format == "json") {
        cfg.format = OutputFormat::json;
      } else if (format == "csv") {
        cfg.format = OutputFormat::csv;
      } else {
        throw ConfigError("config: output format must be json or csv");
      }
    } else {
      throw ConfigError("config: unknown field '" + key + "'");
    }
  }
  if (!cfg.experiment.empty() && !known_experiment(cfg.experiment)) {
    throw ConfigError("config: unknown experiment '" + cfg.experiment + "'");
  }
  if (cfg.v_sq <= 0.0 || cfg.v_anti <= 0.0 || cfg.v_sq > cfg.v_anti ||
      cfg.v_sq * cfg.v_anti < 1.0 - kPhysicalSlack) {
    throw ConfigError("config: squeezer variances must satisfy 0 < v_sq <= v_anti and v_sq*v_anti >= 1");
  }
  if (cfg.gain && (!std::isfinite(*cfg.gain) || *cfg.gain < 0.0)) {
    throw ConfigError("config: gain must be finite and >= 0");
  }
  if (cfg.eta && (*cfg.eta < 0.0 || *cfg.eta > 1.0)) {
    throw ConfigError("config: eta must lie in [0,1]");
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text);
}

Json run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "swap_ghz_ghz") {
    return run_swap_ghz_ghz(config);
  }
  if (config.experiment == "swap_ghz_epr") {
    return run_swap_ghz_epr(config);
  }
  if (config.experiment == "sweep_loss") {
    return run_sweep_loss(config);
  }
  if (config.experiment == "ppt_file") {
    return run_ppt_file(config);
  }
  if (config.experiment == "thresholds") {
    return run_thresholds(config);
  }
  if (config.experiment == "tomography_roundtrip") {
    return run_tomography_roundtrip(config);
  }
  throw ConfigError("config: unknown experiment '" + config.experiment + "'");
}

namespace {

const Json* find_member(const Json& obj, const std::string& key) {
  for (const auto& [k, v] : obj.members()) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

std::string sweep_csv(const Json& report) {
  const Json* rows = find_member(report, "rows");
  if (rows == nullptr || !rows->is_array()) {
    throw std::logic_error("sweep_csv: report has no rows");
  }
  static const std::vector<std::string> header = {"eta",    "ppt_d1",    "ppt_d2",
                                                  "ppt_d3", "entangled", "boundary"};
  std::vector<std::vector<std::string>> records;
  for (const Json& row : rows->elements()) {
    std::vector<std::string> record;
    for (const auto& key : header) {
      const Json* cell = find_member(row, key);
      record.push_back(cell != nullptr ? cell->scalar_text() : "");
    }
    records.push_back(std::move(record));
  }
  return to_csv(header, records);
}

}  // namespace

std::string render_report(const Json& report, const ExperimentConfig& config) {
  if (config.format == OutputFormat::json) {
    return report.dump();
  }
  if (config.experiment == "sweep_loss") {
    return sweep_csv(report);
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [key, value] : flatten_json(report)) {
    rows.push_back({key, value});
  }
  return to_csv({"key", "value"}, rows);
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Covariance-matrix simulator of continuous-variable entanglement swapping"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::string gain_text;
  std::string input_path;
  double squeezing_db = 0.0;
  double anti_squeezing_db = 0.0;
  double eta = 1.0;
  bool has_sq_db = false;
  bool has_anti_db = false;
  bool has_eta = false;

  for (const auto& [name, help] : experiment_table()) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config JSON file");
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--squeezing-db", squeezing_db,
                    "squeezed-quadrature noise in dB (negative)")
        ->each([&](const std::string&) { has_sq_db = true; });
    sub->add_option("--anti-squeezing-db", anti_squeezing_db,
                    "anti-squeezed-quadrature noise in dB")
        ->each([&](const std::string&) { has_anti_db = true; });
    sub->add_option("--gain", gain_text, "classical channel gain, or 'optimal'");
    sub->add_option("--eta", eta, "channel efficiency in [0,1]")
        ->each([&](const std::string&) { has_eta = true; });
    sub->add_option("--input", input_path, "covariance JSON file (ppt_file)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config_file(config_path);
    }
    const std::string subcommand = app.get_subcommands().front()->get_name();
    if (!cfg.experiment.empty() && cfg.experiment != subcommand) {
      throw ConfigError("config: experiment '" + cfg.experiment +
                        "' does not match subcommand '" + subcommand + "'");
    }
    cfg.experiment = subcommand;

    if (has_sq_db) {
      cfg.v_sq = std::pow(10.0, squeezing_db / 10.0);
      // Without an explicit anti-squeezing level the source is taken pure.
      cfg.v_anti = has_anti_db ? std::pow(10.0, anti_squeezing_db / 10.0) : 1.0 / cfg.v_sq;
    } else if (has_anti_db) {
      cfg.v_anti = std::pow(10.0, anti_squeezing_db / 10.0);
    }
    if (cfg.v_sq <= 0.0 || cfg.v_sq > cfg.v_anti ||
        cfg.v_sq * cfg.v_anti < 1.0 - kPhysicalSlack) {
      throw ConfigError("squeezer overrides leave unphysical variances");
    }
    if (!gain_text.empty()) {
      if (gain_text == "optimal") {
        cfg.gain_optimal = true;
        cfg.gain.reset();
      } else {
        std::size_t used = 0;
        double value = 0.0;
        try {
          value = std::stod(gain_text, &used);
        } catch (const std::exception&) {
          throw ConfigError("--gain: expected a number or 'optimal'");
        }
        if (used != gain_text.size() || !std::isfinite(value) || value < 0.0) {
          throw ConfigError("--gain: expected a finite non-negative number or 'optimal'");
        }
        cfg.gain = value;
        cfg.gain_optimal = false;
      }
    }
    if (has_eta) {
      if (eta < 0.0 || eta > 1.0) {
        throw ConfigError("--eta: must lie in [0,1]");
      }
      cfg.eta = eta;
      cfg.eta_sweep.reset();
    }
    if (!input_path.empty()) {
      cfg.input_path = input_path;
    }
    if (!out_path.empty()) {
      cfg.out_path = out_path;
    }
    if (!format.empty()) {
      cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    }

    const Json report = run_experiment(cfg);
    const std::string rendered = render_report(report, cfg);
    if (cfg.out_path.empty()) {
      std::cout << rendered;
    } else {
      try {
        write_text_file(cfg.out_path, rendered);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cvswap
