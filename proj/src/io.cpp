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

#include "cvswap/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cvswap {

std::string format_number(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  std::string s(buf);
  if (s == "-0") {
    s = "0";
  }
  return s;
}

Json::Json() : kind_(Kind::null) {}

Json Json::object() {
  Json j;
  j.kind_ = Kind::object;
  return j;
}

Json Json::array() {
  Json j;
  j.kind_ = Kind::array;
  return j;
}

Json Json::number(double v) {
  Json j;
  j.kind_ = Kind::number;
  j.num_ = v;
  return j;
}

Json Json::number_full(double v) {
  Json j;
  j.kind_ = Kind::number;
  j.num_ = v;
  j.full_precision_ = true;
  return j;
}

Json Json::integer(long long v) {
  Json j;
  j.kind_ = Kind::integer;
  j.int_ = v;
  return j;
}

Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::boolean;
  j.bool_ = v;
  return j;
}

Json Json::string(std::string v) {
  Json j;
  j.kind_ = Kind::string;
  j.str_ = std::move(v);
  return j;
}

Json& Json::set(const std::string& key, Json value) {
  if (kind_ != Kind::object) {
    throw std::logic_error("Json::set on a non-object");
  }
  members_.emplace_back(key, std::move(value));
  return *this;
}

Json& Json::push(Json value) {
  if (kind_ != Kind::array) {
    throw std::logic_error("Json::push on a non-array");
  }
  elements_.push_back(std::move(value));
  return *this;
}

bool Json::is_object() const { return kind_ == Kind::object; }
bool Json::is_array() const { return kind_ == Kind::array; }

const std::vector<std::pair<std::string, Json>>& Json::members() const {
  return members_;
}

const std::vector<Json>& Json::elements() const { return elements_; }

std::string Json::scalar_text() const {
  switch (kind_) {
    case Kind::number: {
      if (!full_precision_) {
        return format_number(num_);
      }
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.17g", num_);
      return buf;
    }
    case Kind::integer:
      return std::to_string(int_);
    case Kind::boolean:
      return bool_ ? "true" : "false";
    case Kind::string:
      return str_;
    case Kind::null:
      return "null";
    default:
      throw std::logic_error("Json::scalar_text on a container");
  }
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

}  // namespace

void Json::dump_to(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (kind_) {
    case Kind::object: {
      if (members_.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad;
        append_escaped(out, members_[i].first);
        out += ": ";
        members_[i].second.dump_to(out, indent, depth + 1);
        out += i + 1 < members_.size() ? ",\n" : "\n";
      }
      out += close_pad + "}";
      return;
    }
    case Kind::array: {
      if (elements_.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        out += pad;
        elements_[i].dump_to(out, indent, depth + 1);
        out += i + 1 < elements_.size() ? ",\n" : "\n";
      }
      out += close_pad + "]";
      return;
    }
    case Kind::string:
      append_escaped(out, str_);
      return;
    default:
      out += scalar_text();
      return;
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  out.push_back('\n');
  return out;
}

Json covariance_to_json(const GaussianState& state, bool full_precision) {
  Json doc = Json::object();
  doc.set("n_modes", Json::integer(state.n_modes));
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < state.cov.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < state.cov.cols(); ++c) {
      row.push(full_precision ? Json::number_full(state.cov(r, c))
                              : Json::number(state.cov(r, c)));
    }
    rows.push(std::move(row));
  }
  doc.set("cov", std::move(rows));
  return doc;
}

namespace {

nlohmann::json parse_or_throw(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

}  // namespace

GaussianState covariance_from_json_text(const std::string& text) {
  const nlohmann::json j = parse_or_throw(text, "covariance file");
  if (!j.is_object() || !j.contains("n_modes") || !j.contains("cov")) {
    throw std::invalid_argument("covariance file: expected keys n_modes and cov");
  }
  const int n = j.at("n_modes").get<int>();
  if (n < 1) {
    throw std::invalid_argument("covariance file: n_modes must be >= 1");
  }
  const auto& rows = j.at("cov");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(2 * n)) {
    throw std::invalid_argument("covariance file: cov must be a 2N x 2N matrix");
  }
  Eigen::MatrixXd cov(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; ++r) {
    const auto& row = rows.at(r);
    if (!row.is_array() || row.size() != static_cast<std::size_t>(2 * n)) {
      throw std::invalid_argument("covariance file: cov row " + std::to_string(r) +
                                  " has wrong length");
    }
    for (int c = 0; c < 2 * n; ++c) {
      cov(r, c) = row.at(c).get<double>();
    }
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-6) {
    throw std::invalid_argument("covariance file: matrix asymmetry exceeds 1e-6");
  }
  // Symmetrize the rounded input exactly.
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState{n, cov};
}

GaussianState load_covariance_file(const std::string& path) {
  return covariance_from_json_text(read_text_file(path));
}

void save_covariance_file(const GaussianState& state, const std::string& path) {
  write_text_file(path, covariance_to_json(state, true).dump());
}

namespace {

const char* quad_label(int mode, Quadrature q) {
  static const char* labels[6] = {"x_D1", "p_D1", "x_D2", "p_D2", "x_D3", "p_D3"};
  return labels[2 * mode + (q == Quadrature::phase ? 1 : 0)];
}

struct QuadRef {
  int mode;
  Quadrature quad;
};

QuadRef parse_quad_label(const std::string& label) {
  for (int mode = 0; mode < 3; ++mode) {
    for (Quadrature q : {Quadrature::amplitude, Quadrature::phase}) {
      if (label == quad_label(mode, q)) {
        return {mode, q};
      }
    }
  }
  throw std::invalid_argument("measurement file: unknown quadrature label '" + label + "'");
}

int mode_pair_index(int i, int j) {
  if (i == 0 && j == 1) return 0;
  if (i == 0 && j == 2) return 1;
  if (i == 1 && j == 2) return 2;
  return -1;
}

int ordered_pair_index(int i, int j) {
  constexpr int table[3][3] = {{-1, 0, 2}, {1, -1, 4}, {3, 5, -1}};
  return table[i][j];
}

}  // namespace

Json measurement_set_to_json(const MeasurementSet& m) {
  Json singles = Json::object();
  for (int i = 0; i < 3; ++i) {
    if (m.var_x[i]) {
      singles.set(quad_label(i, Quadrature::amplitude), Json::number(*m.var_x[i]));
    }
    if (m.var_p[i]) {
      singles.set(quad_label(i, Quadrature::phase), Json::number(*m.var_p[i]));
    }
  }
  Json pairs = Json::array();
  auto push_pair = [&](const char* lhs, const char* rhs, const char* sign,
                       const std::optional<double>& v) {
    if (!v) {
      return;
    }
    Json entry = Json::object();
    entry.set("lhs", Json::string(lhs));
    entry.set("rhs", Json::string(rhs));
    entry.set("sign", Json::string(sign));
    entry.set("variance", Json::number(*v));
    pairs.push(std::move(entry));
  };
  constexpr int mode_pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    push_pair(quad_label(mode_pairs[k][0], Quadrature::amplitude),
              quad_label(mode_pairs[k][1], Quadrature::amplitude), "-", m.xx_diff[k]);
  }
  for (int k = 0; k < 3; ++k) {
    push_pair(quad_label(mode_pairs[k][0], Quadrature::phase),
              quad_label(mode_pairs[k][1], Quadrature::phase), "+", m.pp_sum[k]);
  }
  constexpr int ordered[6][2] = {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}};
  for (int k = 0; k < 6; ++k) {
    push_pair(quad_label(ordered[k][0], Quadrature::amplitude),
              quad_label(ordered[k][1], Quadrature::phase), "+", m.xp_sum[k]);
  }
  Json doc = Json::object();
  doc.set("singles", std::move(singles));
  doc.set("pairs", std::move(pairs));
  return doc;
}

MeasurementSet measurement_set_from_json_text(const std::string& text) {
  const nlohmann::json j = parse_or_throw(text, "measurement file");
  if (!j.is_object() || !j.contains("singles") || !j.contains("pairs")) {
    throw std::invalid_argument("measurement file: expected keys singles and pairs");
  }
  MeasurementSet m;
  for (const auto& [label, value] : j.at("singles").items()) {
    const QuadRef ref = parse_quad_label(label);
    auto& slot = ref.quad == Quadrature::amplitude ? m.var_x[ref.mode] : m.var_p[ref.mode];
    slot = value.get<double>();
  }
  for (const auto& entry : j.at("pairs")) {
    const QuadRef lhs = parse_quad_label(entry.at("lhs").get<std::string>());
    const QuadRef rhs = parse_quad_label(entry.at("rhs").get<std::string>());
    const std::string sign = entry.at("sign").get<std::string>();
    const double variance = entry.at("variance").get<double>();
    if (sign != "+" && sign != "-") {
      throw std::invalid_argument("measurement file: sign must be '+' or '-'");
    }
    if (lhs.quad == Quadrature::amplitude && rhs.quad == Quadrature::amplitude) {
      if (sign != "-") {
        throw std::invalid_argument("measurement file: x-x pairs use the difference form");
      }
      const int k = mode_pair_index(std::min(lhs.mode, rhs.mode),
                                    std::max(lhs.mode, rhs.mode));
      if (k < 0 || lhs.mode == rhs.mode) {
        throw std::invalid_argument("measurement file: bad x-x pair");
      }
      m.xx_diff[k] = variance;
    } else if (lhs.quad == Quadrature::phase && rhs.quad == Quadrature::phase) {
      if (sign != "+") {
        throw std::invalid_argument("measurement file: p-p pairs use the sum form");
      }
      const int k = mode_pair_index(std::min(lhs.mode, rhs.mode),
                                    std::max(lhs.mode, rhs.mode));
      if (k < 0 || lhs.mode == rhs.mode) {
        throw std::invalid_argument("measurement file: bad p-p pair");
      }
      m.pp_sum[k] = variance;
    } else {
      if (sign != "+") {
        throw std::invalid_argument("measurement file: x-p pairs use the sum form");
      }
      const QuadRef xref = lhs.quad == Quadrature::amplitude ? lhs : rhs;
      const QuadRef pref = lhs.quad == Quadrature::amplitude ? rhs : lhs;
      const int k = ordered_pair_index(xref.mode, pref.mode);
      if (k < 0) {
        throw std::invalid_argument("measurement file: same-mode x-p pair is not part of the set");
      }
      m.xp_sum[k] = variance;
    }
  }
  return m;
}

MeasurementSet load_measurement_file(const std::string& path) {
  return measurement_set_from_json_text(read_text_file(path));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') {
      quoted += "\"\"";
    } else {
      quoted.push_back(c);
    }
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) {
        out.push_back(',');
      }
      out += csv_field(row[i]);
    }
    out += "\r\n";
  };
  append_row(header);
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::invalid_argument("to_csv: row width does not match header");
    }
    append_row(row);
  }
  return out;
}

namespace {

void flatten_into(const Json& node, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.members()) {
      flatten_into(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.is_array()) {
    const auto& elems = node.elements();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      flatten_into(elems[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out.emplace_back(prefix, node.scalar_text());
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> flatten_json(const Json& doc) {
  std::vector<std::pair<std::string, std::string>> out;
  flatten_into(doc, "", out);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot write file: " + path);
  }
  out << content;
}

}  // namespace cvswap
