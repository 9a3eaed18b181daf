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

#include "imgadd/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "imgadd/errors.hpp"

namespace imgadd {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kCoarrayMergeTol = 1e-9;
}  // namespace

ArrayGeometry::ArrayGeometry(std::vector<double> positions) : positions_(std::move(positions)) {
  if (positions_.empty()) {
    throw std::invalid_argument("array geometry needs at least one element");
  }
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!std::isfinite(positions_[i])) {
      throw std::invalid_argument("array positions must be finite");
    }
    if (i > 0 && !(positions_[i] > positions_[i - 1])) {
      throw std::invalid_argument("array positions must be strictly increasing");
    }
  }
}

AngleGrid::AngleGrid(std::vector<double> angles) : angles_(std::move(angles)) {
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    const double a = angles_[i];
    if (!(a >= -kPi / 2 && a <= kPi / 2)) {
      throw std::invalid_argument("angle " + std::to_string(a) + " outside [-pi/2, pi/2]");
    }
    if (i > 0 && !(a > angles_[i - 1])) {
      throw std::invalid_argument("grid angles must be strictly increasing");
    }
  }
}

PsfSpec::PsfSpec(AngleGrid g, ComplexVector t, ComplexMatrix m)
    : grid(std::move(g)), target(std::move(t)), measurement(std::move(m)) {
  const auto v = static_cast<Index>(grid.size());
  if (target.size() != v || measurement.rows() != v) {
    throw DimensionError("PSF target and measurement matrix must have one row per grid angle");
  }
}

ArrayGeometry ula(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ula: need at least one element");
  std::vector<double> d(n);
  const double offset = 0.5 * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(i) - offset;
  return ArrayGeometry(std::move(d));
}

ArrayGeometry mra7() {
  return ArrayGeometry({-5, -4, -2, 0, 2, 4, 5});
}

ComplexVector steering(const ArrayGeometry& geom, double angle) {
  const double s = std::sin(angle);
  ComplexVector a(static_cast<Index>(geom.size()));
  for (std::size_t n = 0; n < geom.size(); ++n) {
    a(static_cast<Index>(n)) = std::polar(1.0, kPi * geom.positions()[n] * s);
  }
  return a;
}

std::vector<double> sum_coarray(const ArrayGeometry& tx, const ArrayGeometry& rx) {
  std::vector<double> sums;
  sums.reserve(tx.size() * rx.size());
  for (double dt : tx.positions()) {
    for (double dr : rx.positions()) sums.push_back(dt + dr);
  }
  std::sort(sums.begin(), sums.end());
  auto last = std::unique(sums.begin(), sums.end(), [](double a, double b) {
    return std::abs(a - b) <= kCoarrayMergeTol;
  });
  sums.erase(last, sums.end());
  return sums;
}

ComplexMatrix measurement_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                 const AngleGrid& grid) {
  const auto nt = static_cast<Index>(tx.size());
  const auto nr = static_cast<Index>(rx.size());
  ComplexMatrix a(static_cast<Index>(grid.size()), nt * nr);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ComplexVector at = steering(tx, grid[i]);
    const ComplexVector ar = steering(rx, grid[i]);
    for (Index t = 0; t < nt; ++t) {
      a.row(static_cast<Index>(i)).segment(t * nr, nr) = (at(t) * ar).transpose();
    }
  }
  return a;
}

AngleGrid uniform_grid(std::size_t v) {
  if (v == 0) throw std::invalid_argument("uniform_grid: need at least one angle");
  std::vector<double> angles(v);
  const double step = kPi / static_cast<double>(v);
  for (std::size_t i = 0; i < v; ++i) {
    angles[i] = -kPi / 2 + (static_cast<double>(i) + 0.5) * step;
  }
  // The odd-length midpoint lands on broadside; pin it to exactly zero.
  if (v % 2 == 1) angles[v / 2] = 0.0;
  return AngleGrid(std::move(angles));
}

namespace {

// Chebyshev polynomial T_order(x) for any real x.
double chebyshev_poly(int order, double x) {
  if (std::abs(x) <= 1.0) return std::cos(order * std::acos(x));
  if (x > 1.0) return std::cosh(order * std::acosh(x));
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * std::cosh(order * std::acosh(-x));
}

}  // namespace

RealVector chebyshev_window(std::size_t n, double sidelobe_db) {
  if (n < 2) throw std::invalid_argument("chebyshev_window: need at least 2 taps");
  if (!(sidelobe_db > 0.0)) throw std::invalid_argument("chebyshev_window: sidelobe_db must be > 0");

  // Sample the Chebyshev polynomial at the DFT frequencies and transform back.
  const int order = static_cast<int>(n) - 1;
  const double beta = std::cosh(std::acosh(std::pow(10.0, sidelobe_db / 20.0)) / order);
  const auto m = static_cast<double>(n);
  const bool odd = (n % 2 == 1);

  std::vector<Complex> spectrum(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = chebyshev_poly(order, beta * std::cos(kPi * static_cast<double>(k) / m));
    // Even lengths need a half-sample shift to keep the taper symmetric.
    spectrum[k] = odd ? Complex(p, 0.0) : p * std::polar(1.0, kPi * static_cast<double>(k) / m);
  }
  std::vector<double> dft(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += spectrum[k] * std::polar(1.0, -2.0 * kPi * static_cast<double>(i * k % n) / m);
    }
    dft[i] = acc.real();
  }

  RealVector w(static_cast<Index>(n));
  if (odd) {
    const std::size_t half = (n + 1) / 2;
    // w = [dft[half-1], ..., dft[1], dft[0], dft[1], ..., dft[half-1]]
    for (std::size_t i = 0; i < half; ++i) {
      w(static_cast<Index>(half - 1 - i)) = dft[i];
      w(static_cast<Index>(half - 1 + i)) = dft[i];
    }
  } else {
    const std::size_t half = n / 2 + 1;
    // w = [dft[half-1], ..., dft[1], dft[1], ..., dft[half-1]]
    Index idx = 0;
    for (std::size_t i = half - 1; i >= 1; --i) w(idx++) = dft[i];
    for (std::size_t i = 1; i < half; ++i) w(idx++) = dft[i];
  }
  return w / w.maxCoeff();
}

ComplexVector chebyshev_target(std::size_t coarray_size, double sidelobe_db,
                               const AngleGrid& grid, PsfNormalization norm) {
  if (coarray_size < 2) throw std::invalid_argument("chebyshev_target: coarray_size must be >= 2");
  const RealVector w = chebyshev_window(coarray_size, sidelobe_db);
  const ArrayGeometry virtual_array = ula(coarray_size);

  ComplexVector psi(static_cast<Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    psi(static_cast<Index>(i)) = (steering(virtual_array, grid[i]).array() * w.cast<Complex>().array()).sum();
  }
  if (norm == PsfNormalization::kUnitPeak) psi /= w.sum();
  return psi;
}

}  // namespace imgadd
