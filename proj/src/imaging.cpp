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

#include "imgadd/imaging.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "imgadd/errors.hpp"
#include "imgadd/random.hpp"

namespace imgadd {

void Scene::validate() const {
  constexpr double half_pi = std::numbers::pi / 2;
  for (const Scatterer& s : scatterers) {
    if (!(s.angle >= -half_pi && s.angle <= half_pi)) {
      throw std::invalid_argument("scatterer angle outside [-pi/2, pi/2]");
    }
    if (!std::isfinite(s.reflectivity.real()) || !std::isfinite(s.reflectivity.imag())) {
      throw std::invalid_argument("scatterer reflectivity must be finite");
    }
  }
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise standard deviation must be >= 0");
}

ComplexMatrix channel_matrix(const Scene& scene, const ArrayGeometry& tx,
                             const ArrayGeometry& rx) {
  scene.validate();
  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Index>(rx.size()), static_cast<Index>(tx.size()));
  for (const Scatterer& s : scene.scatterers) {
    h.noalias() += s.reflectivity * steering(rx, s.angle) * steering(tx, s.angle).transpose();
  }
  return h;
}

Complex measure(const ComplexMatrix& h, const ComplexVector& w_tx, const ComplexVector& w_rx,
                const ComplexVector& noise) {
  if (h.rows() != w_rx.size() || h.cols() != w_tx.size() || noise.size() != w_rx.size()) {
    throw DimensionError("measure: channel, weights and noise dimensions disagree");
  }
  return (w_rx.transpose() * h * w_tx).value() + (w_rx.transpose() * noise).value();
}

CompositeImage scan(const Scene& scene, const ArrayGeometry& tx, const ArrayGeometry& rx,
                    const AnalogFactorization& factors, const AngleGrid& grid,
                    std::uint64_t seed) {
  const auto n_tx = static_cast<Index>(tx.size());
  const auto n_rx = static_cast<Index>(rx.size());
  if (factors.tx_phases.rows() != n_tx || factors.rx_phases.rows() != n_rx) {
    throw DimensionError("scan: factorization does not match the array geometries");
  }
  const ComplexMatrix h = channel_matrix(scene, tx, rx);
  const Index q_count = factors.count();
  const auto u_count = static_cast<Index>(grid.size());

  CompositeImage image{grid, ComplexVector::Zero(u_count),
                       std::vector<ComplexVector>(static_cast<std::size_t>(q_count),
                                                  ComplexVector::Zero(u_count))};
  ComplexVector noise = ComplexVector::Zero(n_rx);
  // E|n|^2 = noise_std^2 split evenly between real and imaginary parts.
  const double part_std = scene.noise_std / std::numbers::sqrt2;

  for (Index i = 0; i < u_count; ++i) {
    const ComplexVector focus_tx = steering(tx, grid[static_cast<std::size_t>(i)]).conjugate();
    const ComplexVector focus_rx = steering(rx, grid[static_cast<std::size_t>(i)]).conjugate();
    for (Index q = 0; q < q_count; ++q) {
      const ComplexVector w_tx = factors.tx_gains(q) * factors.tx_phases.col(q).cwiseProduct(focus_tx);
      const ComplexVector w_rx = factors.rx_gains(q) * factors.rx_phases.col(q).cwiseProduct(focus_rx);
      if (scene.noise_std > 0.0) {
        RandomStream rng(RandomStream::derive(
            {seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(q)}));
        for (Index n = 0; n < n_rx; ++n) {
          const double re = rng.normal();
          noise(n) = Complex(re, rng.normal()) * part_std;
        }
      }
      const Complex y = measure(h, w_tx, w_rx, noise);
      image.components[static_cast<std::size_t>(q)](i) = y;
    }
  }
  for (const ComplexVector& c : image.components) image.composite += c;
  return image;
}

}  // namespace imgadd
