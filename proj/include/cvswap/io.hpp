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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cvswap/criteria.hpp"
#include "cvswap/gaussian.hpp"

namespace cvswap {

/// Fixed 12-significant-digit rendering used for every number the tool
/// emits, so identical runs produce byte-identical output.
std::string format_number(double value);

/// Minimal ordered JSON document builder. Keys keep insertion order and all
/// numbers go through format_number.
class Json {
 public:
  Json();  // null

  static Json object();
  static Json array();
  static Json number(double v);
  /// Shortest exact representation; used for interchange files that must
  /// round-trip bit-for-bit rather than for fixed-width reports.
  static Json number_full(double v);
  static Json integer(long long v);
  static Json boolean(bool v);
  static Json string(std::string v);

  Json& set(const std::string& key, Json value);  // object member
  Json& push(Json value);                         // array element

  bool is_object() const;
  bool is_array() const;
  const std::vector<std::pair<std::string, Json>>& members() const;
  const std::vector<Json>& elements() const;
  /// Scalar rendering (numbers/strings/bools) without JSON quoting.
  std::string scalar_text() const;

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { null, object, array, number, integer, boolean, string };
  Kind kind_;
  bool full_precision_ = false;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> elements_;

  void dump_to(std::string& out, int indent, int depth) const;
};

/// Shared covariance-file schema: {"n_modes": N, "cov": [[...], ...]} with
/// the full row-major matrix. Extra keys are ignored on input.
/// full_precision selects exact round-trip rendering of the entries.
Json covariance_to_json(const GaussianState& state, bool full_precision = false);
GaussianState covariance_from_json_text(const std::string& text);
GaussianState load_covariance_file(const std::string& path);
void save_covariance_file(const GaussianState& state, const std::string& path);

/// MeasurementSet schema:
/// {"singles": {"x_D1": v, ...},
///  "pairs": [{"lhs": "x_D1", "rhs": "x_D2", "sign": "-", "variance": v}, ...]}
Json measurement_set_to_json(const MeasurementSet& m);
MeasurementSet measurement_set_from_json_text(const std::string& text);
MeasurementSet load_measurement_file(const std::string& path);

/// RFC 4180 CSV: header row plus records, quoting fields that need it.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

/// Key/value flattening of a JSON document ("a.b[2].c", scalar) for the
/// generic CSV rendering of non-tabular reports.
std::vector<std::pair<std::string, std::string>> flatten_json(const Json& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace cvswap
