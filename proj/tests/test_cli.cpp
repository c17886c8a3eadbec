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

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "cvswap/experiments.hpp"
#include "cvswap/protocol.hpp"

using namespace cvswap;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cvswap_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("cvswap");
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config_text(R"({
    "experiment": "swap_ghz_epr",
    "squeezer": {"v_sq": 0.3, "v_anti": 5.0},
    "gain": 0.9,
    "eta": 0.7,
    "output": {"path": "out.json", "format": "csv"}
  })");
  CHECK(cfg.experiment == "swap_ghz_epr");
  CHECK(cfg.v_sq == 0.3);
  CHECK(cfg.v_anti == 5.0);
  CHECK(cfg.gain == 0.9);
  CHECK(cfg.eta == 0.7);
  CHECK(cfg.out_path == "out.json");
  CHECK(cfg.format == OutputFormat::csv);

  const ExperimentConfig sweep = parse_config_text(R"({
    "experiment": "sweep_loss",
    "gain": "optimal",
    "eta": {"start": 0.1, "stop": 0.9, "step": 0.1}
  })");
  CHECK(sweep.gain_optimal);
  REQUIRE(sweep.eta_sweep.has_value());
  CHECK(sweep.eta_sweep->start == 0.1);
  CHECK(sweep.eta_sweep->stop == 0.9);

  // Half-specified squeezer resolves to a pure source.
  const ExperimentConfig pure = parse_config_text(R"({"squeezer": {"v_sq": 0.5}})");
  CHECK(pure.v_anti == doctest::Approx(2.0));

  CHECK_THROWS_AS(parse_config_text("{"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"experiment": "frobnicate"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"unknown_field": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"gain": "fast"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"eta": 1.5})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"squeezer": {"v_sq": 0.9, "v_anti": 0.9}})"),
                  ConfigError);
}

TEST_CASE("default swap report quotes the x-difference at -5.85 dB") {
  ExperimentConfig cfg;
  cfg.experiment = "swap_ghz_ghz";
  const std::string report = render_report(run_experiment(cfg), cfg);
  // 10*log10(0.52 / 2) for var(x_C1 - x_C2) against its own vacuum level.
  CHECK(report.find("\"db\": -5.85026652029") != std::string::npos);
  CHECK(report.find("\"gain\": 0.947474747475") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  ExperimentConfig cfg;
  cfg.experiment = "swap_ghz_epr";
  cfg.eta = 0.83;
  const std::string a = render_report(run_experiment(cfg), cfg);
  const std::string b = render_report(run_experiment(cfg), cfg);
  CHECK(a == b);
  CHECK(!a.empty());

  ExperimentConfig sweep;
  sweep.experiment = "sweep_loss";
  sweep.eta_sweep = SweepSpec{0.0, 0.5, 0.05};
  CHECK(render_report(run_experiment(sweep), sweep) ==
        render_report(run_experiment(sweep), sweep));
}

TEST_CASE("csv and json renderings carry identical numbers") {
  ExperimentConfig cfg;
  cfg.experiment = "sweep_loss";
  cfg.eta_sweep = SweepSpec{0.0, 0.3, 0.1};
  const Json report = run_experiment(cfg);

  cfg.format = OutputFormat::csv;
  const std::string csv = render_report(report, cfg);

  // Pull the row values out of the JSON tree with the same formatter.
  std::vector<std::string> json_numbers;
  for (const auto& [key, value] : flatten_json(report)) {
    if (key.rfind("rows[", 0) == 0) {
      json_numbers.push_back(value);
    }
  }
  std::string csv_numbers;
  bool first_line = true;
  for (const char c : csv) {
    if (c == '\r') {
      continue;
    }
    if (c == '\n') {
      if (!first_line) {
        csv_numbers.push_back(',');
      }
      first_line = false;
      continue;
    }
    if (!first_line) {
      csv_numbers.push_back(c);
    }
  }
  std::string joined;
  for (const auto& v : json_numbers) {
    if (!joined.empty()) {
      joined.push_back(',');
    }
    joined += v;
  }
  CHECK(csv_numbers.substr(0, joined.size()) == joined);
}

TEST_CASE("sweep rows are monotone and include the boundary row") {
  ExperimentConfig cfg;
  cfg.experiment = "sweep_loss";
  cfg.eta_sweep = SweepSpec{0.0, 1.0, 0.05};
  const Json report = run_experiment(cfg);

  const auto rows = flatten_json(report);
  double last_eta = -1.0;
  double last_mu1 = 1e18;
  bool saw_boundary = false;
  double eta = 0.0;
  double mu1 = 0.0;
  for (const auto& [key, value] : rows) {
    if (key.find(".eta") != std::string::npos && key.rfind("rows[", 0) == 0) {
      eta = std::stod(value);
      CHECK(eta > last_eta);
      last_eta = eta;
    }
    if (key.find(".ppt_d1") != std::string::npos) {
      mu1 = std::stod(value);
      CHECK(mu1 <= last_mu1 + 1e-9);
      last_mu1 = mu1;
    }
    if (key.find(".boundary") != std::string::npos && value == "true") {
      saw_boundary = true;
      CHECK(std::abs(mu1 - 1.0) < 1e-3);
    }
  }
  CHECK(saw_boundary);
}

TEST_CASE("cli writes files and round-trips covariances") {
  TempDir tmp;

  // Simulated output saved, then fed back through the PPT file command.
  const GaussianState state =
      swap_ghz_epr(build_ghz(NetworkRecipe::ghz_a(0.26, 9.64)),
                   build_epr(NetworkRecipe::epr(0.26, 9.64)), 0.85, ChannelSpec{0.8});
  const std::string cov_path = tmp.file("state.json");
  save_covariance_file(state, cov_path);
  const GaussianState loaded = load_covariance_file(cov_path);
  CHECK((loaded.cov - state.cov).cwiseAbs().maxCoeff() < 1e-12);

  const std::string out_path = tmp.file("report.json");
  CHECK(run_cli({"ppt_file", "--input", cov_path, "--out", out_path}) == 0);
  const std::string report = read_text_file(out_path);
  CHECK(report.find("\"experiment\": \"ppt_file\"") != std::string::npos);
  CHECK(report.find("D1|D2D3") != std::string::npos);

  // Identity covariance sits on the boundary for every splitting.
  const std::string id_path = tmp.file("identity.json");
  save_covariance_file(vacuum_state(3), id_path);
  const std::string id_out = tmp.file("id_report.json");
  CHECK(run_cli({"ppt_file", "--input", id_path, "--out", id_out}) == 0);
  CHECK(read_text_file(id_out).find("\"verdict\": \"boundary\"") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  TempDir tmp;

  CHECK(run_cli({"ppt_file", "--input", tmp.file("missing.json")}) == 1);

  // Asymmetric covariance file.
  write_text_file(tmp.file("bad.json"),
                  R"({"n_modes": 1, "cov": [[1.0, 0.5], [0.0, 1.0]]})");
  CHECK(run_cli({"ppt_file", "--input", tmp.file("bad.json")}) == 1);

  // Wrong dimension for the three-mode PPT report.
  write_text_file(tmp.file("dim.json"), R"({"n_modes": 1, "cov": [[1.0, 0.0], [0.0, 1.0]]})");
  CHECK(run_cli({"ppt_file", "--input", tmp.file("dim.json")}) == 1);

  // Config/subcommand mismatch.
  write_text_file(tmp.file("cfg.json"), R"({"experiment": "swap_ghz_ghz"})");
  CHECK(run_cli({"swap_ghz_epr", "--config", tmp.file("cfg.json")}) == 1);

  // Bad sweeps and overrides.
  write_text_file(tmp.file("sweep.json"),
                  R"({"experiment": "sweep_loss", "eta": {"start": 0.5, "stop": 0.1}})");
  CHECK(run_cli({"sweep_loss", "--config", tmp.file("sweep.json")}) == 1);
  CHECK(run_cli({"swap_ghz_epr", "--eta", "1.4"}) == 1);
  CHECK(run_cli({"swap_ghz_ghz", "--gain", "nonsense"}) == 1);

  // Unwritable output path is a config problem.
  CHECK(run_cli({"swap_ghz_ghz", "--out", "/nonexistent_dir/out.json"}) == 1);

  // Overflowing gain drives the covariance out of double range: the
  // physicality guard reports a numerical failure.
  CHECK(run_cli({"swap_ghz_epr", "--gain", "1e160",
                 "--out", tmp.file("blown.json")}) == 2);

  // Success path writes a file and returns 0.
  CHECK(run_cli({"swap_ghz_ghz", "--out", tmp.file("ok.json")}) == 0);
}

TEST_CASE("db overrides") {
  TempDir tmp;
  const std::string out = tmp.file("db.json");

  // Explicit squeezing and anti-squeezing levels.
  CHECK(run_cli({"swap_ghz_ghz", "--squeezing-db", "-5.90", "--anti-squeezing-db",
                 "9.84", "--out", out}) == 0);
  const std::string report = read_text_file(out);
  CHECK(report.find("\"v_sq\": 0.25703957827") != std::string::npos);

  // Squeezing alone implies a pure source.
  CHECK(run_cli({"swap_ghz_ghz", "--squeezing-db", "-10.9", "--out", out}) == 0);
  const std::string pure_report = read_text_file(out);
  CHECK(pure_report.find("\"v_sq\": 0.0812830516164") != std::string::npos);
  CHECK(pure_report.find("\"v_anti\": 12.3026877081") != std::string::npos);
}

TEST_CASE("verdict strings cover the boundary cases") {
  // Vacuum squeezers with the matched gain: exactly on the boundary.
  ExperimentConfig vac;
  vac.experiment = "swap_ghz_ghz";
  vac.v_sq = 1.0;
  vac.v_anti = 1.0;
  const std::string vac_report = render_report(run_experiment(vac), vac);
  CHECK(vac_report.find("\"verdict\": \"separable (boundary)\"") != std::string::npos);

  // Unit gain below the squeezing threshold: criteria not satisfied.
  ExperimentConfig weak;
  weak.experiment = "swap_ghz_ghz";
  weak.gain = 1.0;
  weak.v_sq = std::exp(-0.6);  // r = 0.3 < 0.44
  weak.v_anti = std::exp(0.6);
  const std::string weak_report = render_report(run_experiment(weak), weak);
  CHECK(weak_report.find("\"verdict\": \"separable\"") != std::string::npos);

  // Full loss separates D1 from the rest.
  ExperimentConfig dark;
  dark.experiment = "swap_ghz_epr";
  dark.eta = 0.0;
  const Json report = run_experiment(dark);
  bool d1_separable = false;
  for (const auto& [key, value] : flatten_json(report)) {
    if (key == "ppt.splittings[0].verdict") {
      d1_separable = value == "separable";
    }
  }
  CHECK(d1_separable);
}

TEST_CASE("bundled sample configs run clean") {
  TempDir tmp;
  CHECK(run_cli({"swap_ghz_epr", "--config", "configs/swap_ghz_epr.json",
                 "--out", tmp.file("epr.json")}) == 0);
  const std::string report = read_text_file(tmp.file("epr.json"));
  CHECK(report.find("\"eta\": 0.98") != std::string::npos);
  CHECK(report.find("\"gain\": 0.85") != std::string::npos);

  CHECK(run_cli({"sweep_loss", "--config", "configs/sweep_loss.json", "--format",
                 "csv", "--out", tmp.file("sweep.csv")}) == 0);
  const std::string csv = read_text_file(tmp.file("sweep.csv"));
  CHECK(csv.rfind("eta,ppt_d1,ppt_d2,ppt_d3,entangled,boundary", 0) == 0);
}

TEST_CASE("tomography round-trip command") {
  ExperimentConfig cfg;
  cfg.experiment = "tomography_roundtrip";
  cfg.eta = 0.9;
  const Json report = run_experiment(cfg);
  bool ok = false;
  for (const auto& [key, value] : flatten_json(report)) {
    if (key == "round_trip_ok") {
      ok = value == "true";
    }
  }
  CHECK(ok);
}
