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

#include <cstdint>
#include <vector>

#include "imgadd/array_model.hpp"
#include "imgadd/factorize.hpp"
#include "imgadd/linalg.hpp"
#include "imgadd/solver.hpp"

namespace imgadd {

struct Scatterer {
  double angle = 0.0;  ///< radians, within [-pi/2, pi/2]
  Complex reflectivity{1.0, 0.0};
};

struct Scene {
  std::vector<Scatterer> scatterers;
  double noise_std = 0.0;  ///< per receive element, complex circular Gaussian

  /// Throws std::invalid_argument for out-of-range angles or negative noise.
  void validate() const;
};

/// Composite image with the component images it was summed from.
struct CompositeImage {
  AngleGrid grid;
  ComplexVector composite;
  std::vector<ComplexVector> components;
};

/// H = sum over scatterers of gamma * a_r(v) a_t(v)^T.
ComplexMatrix channel_matrix(const Scene& scene, const ArrayGeometry& tx, const ArrayGeometry& rx);

/// y = w_r^T H w_t + w_r^T n.
Complex measure(const ComplexMatrix& h, const ComplexVector& w_tx, const ComplexVector& w_rx,
                const ComplexVector& noise);

/// Sequential scan over `grid`. For steering direction u and component q the
/// weights are c_{x,q} f_{x,q} o conj(a_x(u)), so that the image of a unit
/// scatterer at v is P(sin v - sin u) with P(s) = sum W_ij exp(j pi (d_ri + d_tj) s).
/// Noise for (direction i, component q) is drawn from a stream seeded by
/// (seed, i, q).
CompositeImage scan(const Scene& scene, const ArrayGeometry& tx, const ArrayGeometry& rx,
                    const AnalogFactorization& factors, const AngleGrid& grid,
                    std::uint64_t seed = 0);

inline CompositeImage scan(const Scene& scene, const ArrayGeometry& tx, const ArrayGeometry& rx,
                           const BeamformerSolution& solution, const AngleGrid& grid,
                           std::uint64_t seed = 0) {
  return scan(scene, tx, rx, solution.factors, grid, seed);
}

}  // namespace imgadd
