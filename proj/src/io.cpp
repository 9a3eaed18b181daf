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

#include "imgadd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "imgadd/errors.hpp"

namespace imgadd::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> wrapped_phases(const ComplexMatrix& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (Index i = 0; i < m.size(); ++i) {
    double a = std::arg(m.data()[i]);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    out[static_cast<std::size_t>(i)] = a;
  }
  return out;
}

std::vector<double> real_parts(const ComplexVector& v) {
  const RealVector re = v.real();
  return {re.data(), re.data() + re.size()};
}

std::vector<double> imag_parts(const ComplexVector& v) {
  const RealVector im = v.imag();
  return {im.data(), im.data() + im.size()};
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError("invalid number '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

long long parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError("invalid integer '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KeyValueFile KeyValueFile::parse(std::istream& in, std::string_view source) {
  KeyValueFile kv;
  kv.source_ = std::string(source);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(kv.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    if (key.empty()) {
      throw ParseError(kv.source_ + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!kv.entries_.emplace(key, std::string(trim(view.substr(eq + 1)))).second) {
      throw ParseError(kv.source_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse(in, path.string());
}

bool KeyValueFile::has(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

const std::string& KeyValueFile::get(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ParseError(source_ + ": missing key '" + std::string(key) + "'");
  return it->second;
}

double KeyValueFile::get_double(std::string_view key) const {
  return parse_double(get(key), key);
}

long long KeyValueFile::get_int(std::string_view key) const {
  return parse_int(get(key), key);
}

bool KeyValueFile::get_bool(std::string_view key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError(source_ + ": invalid boolean '" + v + "' for " + std::string(key));
}

std::vector<double> KeyValueFile::get_doubles(std::string_view key) const {
  const std::string& v = get(key);
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (std::string_view part : split(v, ',')) out.push_back(parse_double(part, key));
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != header_.size()) {
    throw DimensionError("CSV row has " + std::to_string(values.size()) + " values, header has " +
                         std::to_string(header_.size()));
  }
  body_ += join(values);
  body_ += '\n';
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  return out + body_;
}

void CsvTable::save(const std::filesystem::path& path) const {
  write_text(path, str());
}

std::size_t CsvData::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError("CSV column '" + std::string(name) + "' not found");
  return static_cast<std::size_t>(it - header.begin());
}

CsvData read_csv(std::istream& in, std::string_view source) {
  CsvData data;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split(view, ',');
    if (data.header.empty()) {
      for (auto f : fields) data.header.emplace_back(f);
      continue;
    }
    if (fields.size() != data.header.size()) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(data.header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) row.push_back(parse_double(fields[i], data.header[i]));
    data.rows.push_back(std::move(row));
  }
  if (data.header.empty()) throw ParseError(std::string(source) + ": missing CSV header");
  return data;
}

CsvData read_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_csv(in, path.string());
}

std::string format_solution(const SolutionFile& s) {
  const AnalogFactorization& f = s.factors;
  std::ostringstream out;
  out << "# analog beamformer solution\n";
  out << "q = " << f.count() << '\n';
  out << "tx_positions = " << join(s.tx.positions()) << '\n';
  out << "rx_positions = " << join(s.rx.positions()) << '\n';
  out << "residual = " << format_double(s.residual) << '\n';
  out << "iterations = " << s.iterations << '\n';
  out << "converged = " << (s.converged ? "true" : "false") << '\n';
  out << "# phases in radians, column-major (element index fastest)\n";
  out << "tx_phases = " << join(wrapped_phases(f.tx_phases)) << '\n';
  out << "rx_phases = " << join(wrapped_phases(f.rx_phases)) << '\n';
  out << "tx_gains_re = " << join(real_parts(f.tx_gains)) << '\n';
  out << "tx_gains_im = " << join(imag_parts(f.tx_gains)) << '\n';
  out << "rx_gains_re = " << join(real_parts(f.rx_gains)) << '\n';
  out << "rx_gains_im = " << join(imag_parts(f.rx_gains)) << '\n';
  return out.str();
}

SolutionFile parse_solution(const KeyValueFile& kv) {
  const long long q = kv.get_int("q");
  if (q < 0) throw ParseError(kv.source() + ": q must be >= 0");
  ArrayGeometry tx(kv.get_doubles("tx_positions"));
  ArrayGeometry rx(kv.get_doubles("rx_positions"));
  const auto n_tx = static_cast<Index>(tx.size());
  const auto n_rx = static_cast<Index>(rx.size());

  auto phases = [&](std::string_view key, Index rows) {
    const std::vector<double> v = kv.get_doubles(key);
    if (static_cast<Index>(v.size()) != rows * q) {
      throw ParseError(kv.source() + ": " + std::string(key) + " needs " +
                       std::to_string(rows * q) + " values");
    }
    return unit_modulus(Eigen::Map<const RealMatrix>(v.data(), rows, q));
  };
  auto gains = [&](std::string_view re_key, std::string_view im_key) {
    const std::vector<double> re = kv.get_doubles(re_key);
    const std::vector<double> im = kv.get_doubles(im_key);
    if (static_cast<long long>(re.size()) != q || static_cast<long long>(im.size()) != q) {
      throw ParseError(kv.source() + ": gain lists must have q entries");
    }
    ComplexVector g(q);
    for (Index i = 0; i < q; ++i) g(i) = Complex(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
    return g;
  };

  SolutionFile s{tx, rx,
                 AnalogFactorization{phases("tx_phases", n_tx), phases("rx_phases", n_rx),
                                     gains("tx_gains_re", "tx_gains_im"),
                                     gains("rx_gains_re", "rx_gains_im"), false},
                 kv.has("residual") ? kv.get_double("residual") : 0.0,
                 kv.has("iterations") ? static_cast<int>(kv.get_int("iterations")) : 0,
                 kv.has("converged") ? kv.get_bool("converged") : false};
  return s;
}

void write_solution(const std::filesystem::path& path, const SolutionFile& s) {
  write_text(path, format_solution(s));
}

SolutionFile read_solution(const std::filesystem::path& path) {
  return parse_solution(KeyValueFile::load(path));
}

CsvTable complex_matrix_table(const ComplexMatrix& m) {
  CsvTable table({"row", "col", "re", "im"});
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      table.add_row({static_cast<double>(i), static_cast<double>(j), m(i, j).real(), m(i, j).imag()});
    }
  }
  return table;
}

ComplexMatrix read_complex_matrix(const std::filesystem::path& path) {
  const CsvData data = read_csv(path);
  const std::size_t c_row = data.column("row"), c_col = data.column("col");
  const std::size_t c_re = data.column("re"), c_im = data.column("im");
  Index rows = 0, cols = 0;
  for (const auto& r : data.rows) {
    if (r[c_row] < 0 || r[c_col] < 0 || r[c_row] != std::floor(r[c_row]) ||
        r[c_col] != std::floor(r[c_col])) {
      throw ParseError(path.string() + ": row/col must be nonnegative integers");
    }
    rows = std::max(rows, static_cast<Index>(r[c_row]) + 1);
    cols = std::max(cols, static_cast<Index>(r[c_col]) + 1);
  }
  if (rows == 0 || cols == 0) throw ParseError(path.string() + ": empty matrix");
  if (static_cast<Index>(data.rows.size()) != rows * cols) {
    throw ParseError(path.string() + ": expected " + std::to_string(rows * cols) + " entries");
  }
  ComplexMatrix m = ComplexMatrix::Constant(rows, cols, Complex(std::nan(""), 0.0));
  for (const auto& r : data.rows) {
    m(static_cast<Index>(r[c_row]), static_cast<Index>(r[c_col])) = Complex(r[c_re], r[c_im]);
  }
  if (!m.allFinite()) throw ParseError(path.string() + ": duplicate, missing or non-finite entries");
  return m;
}

Scene read_scene(const std::filesystem::path& path, double noise_std) {
  const CsvData data = read_csv(path);
  const std::size_t c_a = data.column("angle_rad"), c_re = data.column("re"), c_im = data.column("im");
  Scene scene;
  scene.noise_std = noise_std;
  for (const auto& r : data.rows) scene.scatterers.push_back({r[c_a], Complex(r[c_re], r[c_im])});
  try {
    scene.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return scene;
}

std::pair<AngleGrid, ComplexVector> read_target(const std::filesystem::path& path) {
  const CsvData data = read_csv(path);
  const std::size_t c_a = data.column("angle_rad"), c_re = data.column("re"), c_im = data.column("im");
  std::vector<double> angles;
  ComplexVector psi(static_cast<Index>(data.rows.size()));
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    angles.push_back(data.rows[i][c_a]);
    psi(static_cast<Index>(i)) = Complex(data.rows[i][c_re], data.rows[i][c_im]);
  }
  if (angles.empty()) throw ParseError(path.string() + ": no target samples");
  try {
    return {AngleGrid(std::move(angles)), psi};
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

}  // namespace imgadd::io
