// Copyright 2026 The eqptomo Authors
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

// Coincidence-count and state file formats.
//
// Counts CSV (UTF-8, LF line endings, '.' decimal point):
//
//   ,H,V,D,A,R,L
//   H,<6 values>
//   V,<6 values>
//   ...
//   L,<6 values>
//
// Rows are Alice's outcome, columns Bob's; the label order is fixed.
//
// Counts JSON: {"counts": [[6 numbers] x 6], "label_order": ["H", ...]}.
// "label_order" is optional and applies to both rows and columns; when absent
// the order is H, V, D, A, R, L.

#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "eqp/errors.hpp"
#include "eqp/pauli.hpp"
#include "eqp/tomography.hpp"

namespace eqp::io {

/// Shortest round-trip text for a double; integral values print without a
/// fractional part.
inline std::string format_number(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15) {
    return std::to_string(static_cast<long long>(x));
  }
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

inline double parse_count(std::string_view cell, int line_no) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(cell) +
                     "' is not a number");
  if (!std::isfinite(v) || v < 0.0)
    throw ParseError("line " + std::to_string(line_no) + ": count " + std::string(cell) +
                     " must be finite and nonnegative");
  return v;
}

}  // namespace detail

inline CoincidenceMatrix read_counts_csv(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (detail::trim(line).empty()) continue;
    lines.push_back(line);
  }
  if (lines.size() != 7)
    throw ParseError("counts CSV must have a header and 6 rows, found " +
                     std::to_string(lines.size()) + " non-empty lines");
  std::string_view header = lines[0];
  if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  const auto head = detail::split(header);
  if (head.size() != 7 || !head[0].empty())
    throw ParseError("counts CSV header must be ',H,V,D,A,R,L'");
  for (int j = 0; j < 6; ++j)
    if (head[j + 1].size() != 1 || head[j + 1][0] != outcome_name(kOutcomes[j]))
      throw ParseError("counts CSV header must be ',H,V,D,A,R,L'");

  CoincidenceMatrix e;
  for (int i = 0; i < 6; ++i) {
    const auto cells = detail::split(lines[i + 1]);
    if (cells.size() != 7)
      throw ParseError("line " + std::to_string(i + 2) + ": expected a label and 6 values");
    if (cells[0].size() != 1 || cells[0][0] != outcome_name(kOutcomes[i]))
      throw ParseError("line " + std::to_string(i + 2) + ": expected row label '" +
                       std::string(1, outcome_name(kOutcomes[i])) + "'");
    for (int j = 0; j < 6; ++j) e.counts(i, j) = detail::parse_count(cells[j + 1], i + 2);
  }
  return e;
}

inline void write_counts_csv(std::ostream& out, const CoincidenceMatrix& e) {
  out << ",H,V,D,A,R,L\n";
  for (int i = 0; i < 6; ++i) {
    out << outcome_name(kOutcomes[i]);
    for (int j = 0; j < 6; ++j) out << ',' << format_number(e.counts(i, j));
    out << '\n';
  }
}

inline CoincidenceMatrix counts_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("counts"))
    throw ParseError("counts JSON must be an object with a \"counts\" array");
  std::array<int, 6> order{0, 1, 2, 3, 4, 5};
  if (doc.contains("label_order")) {
    const auto& labels = doc.at("label_order");
    if (!labels.is_array() || labels.size() != 6)
      throw ParseError("\"label_order\" must list the 6 labels");
    std::array<bool, 6> seen{};
    for (int k = 0; k < 6; ++k) {
      if (!labels[k].is_string()) throw ParseError("\"label_order\" entries must be strings");
      const int idx = static_cast<int>(parse_outcome(labels[k].get<std::string>()));
      if (seen[idx]) throw ParseError("\"label_order\" repeats a label");
      seen[idx] = true;
      order[k] = idx;
    }
  }
  const auto& rows = doc.at("counts");
  if (!rows.is_array() || rows.size() != 6) throw ParseError("\"counts\" must have 6 rows");
  CoincidenceMatrix e;
  for (int i = 0; i < 6; ++i) {
    if (!rows[i].is_array() || rows[i].size() != 6)
      throw ParseError("\"counts\" row " + std::to_string(i) + " must have 6 entries");
    for (int j = 0; j < 6; ++j) {
      if (!rows[i][j].is_number()) throw ParseError("\"counts\" entries must be numbers");
      const double v = rows[i][j].get<double>();
      if (!std::isfinite(v) || v < 0.0) throw ParseError("counts must be finite and nonnegative");
      e.counts(order[i], order[j]) = v;
    }
  }
  return e;
}

inline CoincidenceMatrix read_counts_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("invalid JSON: ") + ex.what());
  }
  return counts_from_json(doc);
}

inline nlohmann::json counts_to_json(const CoincidenceMatrix& e) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 6; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 6; ++j) row.push_back(e.counts(i, j));
    rows.push_back(row);
  }
  return {{"counts", rows}, {"label_order", {"H", "V", "D", "A", "R", "L"}}};
}

inline void write_counts_json(std::ostream& out, const CoincidenceMatrix& e) {
  out << counts_to_json(e).dump(2) << '\n';
}

inline bool has_json_extension(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads counts, choosing the format by the ".json" extension.
inline CoincidenceMatrix load_counts(const std::string& path) {
  std::istringstream in(read_file(path));
  return has_json_extension(path) ? read_counts_json(in) : read_counts_csv(in);
}

namespace detail {

template <int R, int C>
Eigen::Matrix<cplx, R, C> complex_from_json(const nlohmann::json& doc, const char* what) {
  Eigen::Matrix<cplx, R, C> m;
  const auto part = [&](const char* key, int i, int j) -> double {
    if (!doc.contains(key)) return 0.0;
    const auto& a = doc.at(key);
    const auto& v = C == 1 ? a.at(i) : a.at(i).at(j);
    if (!v.is_number()) throw ParseError(std::string(what) + ": entries must be numbers");
    return v.get<double>();
  };
  if (!doc.is_object() || !doc.contains("real"))
    throw ParseError(std::string(what) + " must be an object with \"real\" (and optional \"imag\")");
  try {
    for (int i = 0; i < R; ++i)
      for (int j = 0; j < C; ++j) m(i, j) = cplx(part("real", i, j), part("imag", i, j));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string(what) + " has the wrong shape: " + ex.what());
  }
  return m;
}

}  // namespace detail

/// {"real": [[4] x 4], "imag": [[4] x 4]} in the {HH, HV, VH, VV} basis.
inline DensityMatrix load_density(const std::string& path) {
  DensityMatrix rho;
  try {
    rho.values = detail::complex_from_json<4, 4>(nlohmann::json::parse(read_file(path)),
                                                 "density matrix file");
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("invalid JSON: ") + ex.what());
  }
  if (!rho.is_hermitian(1e-9)) throw ParseError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-9) throw ParseError("density matrix trace is not 1");
  return rho;
}

/// {"real": [4], "imag": [4]} amplitudes in the {HH, HV, VH, VV} basis.
inline Eigen::Vector4cd load_pure_state(const std::string& path) {
  Eigen::Vector4cd psi;
  try {
    psi = detail::complex_from_json<4, 1>(nlohmann::json::parse(read_file(path)), "target state file");
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("invalid JSON: ") + ex.what());
  }
  if (std::abs(psi.norm() - 1.0) > 1e-6) throw ParseError("target state is not normalized");
  return psi;
}

}  // namespace eqp::io
