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

#include <optional>
#include <string>

#include "cvswap/io.hpp"

namespace cvswap {

/// Config/input problems: exit code 1.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Simulation produced or was handed an unphysical state: exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;
};

enum class OutputFormat { json, csv };

/// Config for one experiment run. The gain field accepts a number or the
/// keyword "optimal"; when absent, swap experiments resolve it to the
/// matched-optimal value and the PPT loss experiments to 0.85.
struct ExperimentConfig {
  std::string experiment;
  double v_sq = 0.26;
  double v_anti = 9.64;
  std::optional<double> gain;  // unset = default policy
  bool gain_optimal = false;   // explicit "optimal"
  std::optional<double> eta;
  std::optional<SweepSpec> eta_sweep;
  std::string input_path;
  std::string out_path;
  OutputFormat format = OutputFormat::json;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Runs the configured experiment and returns its report document.
Json run_experiment(const ExperimentConfig& config);

/// Renders the report in the configured format (sweeps become real CSV
/// tables; other reports flatten to key/value records).
std::string render_report(const Json& report, const ExperimentConfig& config);

/// Full command-line entry point (subcommand + options); returns the
/// process exit code: 0 success, 1 config error, 2 numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace cvswap
