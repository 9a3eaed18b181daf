// SPDX-License-Identifier: Apache-2.0
//
// Copyright (c) 2026 The imgadd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imgadd/array_model.hpp"
#include "imgadd/factorize.hpp"
#include "imgadd/imaging.hpp"
#include "imgadd/linalg.hpp"
#include "imgadd/solver.hpp"

namespace imgadd::io {

/// Flat `key = value` text with `#` comments. Keys are case-sensitive and
/// may appear only once.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in, std::string_view source = "<input>");
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;
  double get_double(std::string_view key) const;
  long long get_int(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<double> get_doubles(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  std::string source_;
};

double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

/// Shortest-round-trip style formatting with 17 significant digits.
std::string format_double(double v);

/// Comma-separated values with a single header line.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::string body_;
};

/// Parsed CSV: header names and numeric rows.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;  ///< throws ParseError when absent
};

CsvData read_csv(std::istream& in, std::string_view source = "<input>");
CsvData read_csv(const std::filesystem::path& path);

/// A solved beamformer together with the geometry it was designed for.
struct SolutionFile {
  ArrayGeometry tx;
  ArrayGeometry rx;
  AnalogFactorization factors;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Key-value file; phases are in radians wrapped to [0, 2pi), stored
/// column-major; gains are re/im lists.
std::string format_solution(const SolutionFile& s);
SolutionFile parse_solution(const KeyValueFile& kv);
void write_solution(const std::filesystem::path& path, const SolutionFile& s);
SolutionFile read_solution(const std::filesystem::path& path);

/// Matrix as `row,col,re,im` entries (0-based indices).
CsvTable complex_matrix_table(const ComplexMatrix& m);
ComplexMatrix read_complex_matrix(const std::filesystem::path& path);

/// Scene scatterers from `angle_rad,re,im` rows.
Scene read_scene(const std::filesystem::path& path, double noise_std);

/// Target samples from `angle_rad,re,im` rows.
std::pair<AngleGrid, ComplexVector> read_target(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace imgadd::io
