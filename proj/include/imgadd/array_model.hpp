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

#include <cstddef>
#include <vector>

#include "imgadd/linalg.hpp"

namespace imgadd {

/// Element positions of a linear array in half-wavelength units.
/// Positions are strictly increasing and there is at least one element.
class ArrayGeometry {
 public:
  explicit ArrayGeometry(std::vector<double> positions);

  const std::vector<double>& positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  double aperture() const noexcept { return positions_.back() - positions_.front(); }

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

 private:
  std::vector<double> positions_;
};

/// Strictly increasing far-field angles in [-pi/2, pi/2] (radians).
class AngleGrid {
 public:
  explicit AngleGrid(std::vector<double> angles);

  const std::vector<double>& angles() const noexcept { return angles_; }
  std::size_t size() const noexcept { return angles_.size(); }
  double operator[](std::size_t i) const { return angles_[i]; }

 private:
  std::vector<double> angles_;
};

/// Desired PSF samples together with the measurement matrix that maps
/// vec(W) onto the same angle grid.
struct PsfSpec {
  AngleGrid grid;
  ComplexVector target;
  ComplexMatrix measurement;

  /// Validates that target and measurement rows match the grid length.
  PsfSpec(AngleGrid grid, ComplexVector target, ComplexMatrix measurement);
};

/// n-element uniform array with unit spacing, symmetric about zero.
ArrayGeometry ula(std::size_t n);

/// 7-element minimum-redundancy array with aperture 10: [-5,-4,-2,0,2,4,5].
ArrayGeometry mra7();

/// exp(j*pi*d*sin(angle)) for each element position d.
ComplexVector steering(const ArrayGeometry& geom, double angle);

/// Sorted unique pairwise sums of transmit and receive positions.
std::vector<double> sum_coarray(const ArrayGeometry& tx, const ArrayGeometry& rx);

/// V x (N_r*N_t) matrix; row i is kron(a_t(v_i), a_r(v_i))^T, matching
/// column-major vec(W) with W of size N_r x N_t.
ComplexMatrix measurement_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                 const AngleGrid& grid);

/// v angles at the centres of v equal subintervals of [-pi/2, pi/2].
AngleGrid uniform_grid(std::size_t v);

/// Dolph-Chebyshev taper of length n with sidelobes at -sidelobe_db,
/// scaled to a unit peak coefficient.
RealVector chebyshev_window(std::size_t n, double sidelobe_db);

enum class PsfNormalization {
  kUnitPeak,    ///< max |psi| = 1
  kUnitWeight,  ///< taper with unit peak coefficient, psi(0) = sum of the taper
};

/// Beampattern of a Dolph-Chebyshev taper placed on a contiguous virtual
/// array of coarray_size half-wavelength-spaced elements centred on zero.
ComplexVector chebyshev_target(std::size_t coarray_size, double sidelobe_db,
                               const AngleGrid& grid,
                               PsfNormalization norm = PsfNormalization::kUnitPeak);

}  // namespace imgadd
