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

#include "imgadd/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "imgadd/errors.hpp"
#include "imgadd/random.hpp"

namespace imgadd {

DigitalFactorization digital_factorize(const ComplexMatrix& w, std::optional<double> rank_tol) {
  const Index rank = numerical_rank(w, rank_tol);
  DigitalFactorization out{ComplexMatrix(w.cols(), rank), ComplexMatrix(w.rows(), rank)};
  if (rank == 0) return out;
  const SvdResult s = svd(w);
  for (Index k = 0; k < rank; ++k) {
    out.rx.col(k) = s.singular_values(k) * s.left.col(k);
    out.tx.col(k) = s.right.col(k).conjugate();
  }
  return out;
}

VectorSplit theorem1_vector_split(const ComplexVector& w) {
  const Index n = w.size();
  VectorSplit out{ComplexVector::Ones(n), ComplexVector::Ones(n), 0.0, false};
  const double peak = n > 0 ? w.cwiseAbs().maxCoeff() : 0.0;
  if (!(peak > 0.0)) {
    out.degenerate = true;
    return out;
  }
  out.gain = peak / 2.0;
  for (Index i = 0; i < n; ++i) {
    const double ratio = std::clamp(std::abs(w(i)) / peak, 0.0, 1.0);
    const double spread = std::acos(ratio);
    const double angle = std::arg(w(i));
    out.first(i) = std::polar(1.0, angle + spread);
    out.second(i) = std::polar(1.0, angle - spread);
  }
  return out;
}

AnalogFactorization theorem1_factorize(const DigitalFactorization& digital) {
  if (digital.tx.cols() != digital.rx.cols()) {
    throw DimensionError("digital factorization has mismatched component counts");
  }
  const Index qd = digital.count();
  const Index q_total = 4 * qd;
  AnalogFactorization out{ComplexMatrix(digital.tx.rows(), q_total),
                          ComplexMatrix(digital.rx.rows(), q_total), ComplexVector(q_total),
                          ComplexVector(q_total), false};

  for (Index qt = 0; qt < qd; ++qt) {
    const VectorSplit rx = theorem1_vector_split(digital.rx.col(qt));
    const VectorSplit tx = theorem1_vector_split(digital.tx.col(qt));
    out.degenerate = out.degenerate || rx.degenerate || tx.degenerate;
    for (Index q = 4 * qt + 1; q <= 4 * qt + 4; ++q) {
      const Index i_rx = (1 + (q - 1) % 4 + 1) / 2;  // ceil((1 + (q-1) mod 4) / 2)
      const Index i_tx = 1 + (q - 1) % 2;
      out.rx_phases.col(q - 1) = i_rx == 1 ? rx.first : rx.second;
      out.tx_phases.col(q - 1) = i_tx == 1 ? tx.first : tx.second;
      out.rx_gains(q - 1) = rx.gain;
      out.tx_gains(q - 1) = tx.gain;
    }
  }
  return out;
}

ComplexMatrix reconstruct(const AnalogFactorization& f) {
  if (f.tx_phases.cols() != f.rx_phases.cols() || f.tx_gains.size() != f.tx_phases.cols() ||
      f.rx_gains.size() != f.tx_phases.cols()) {
    throw DimensionError("analog factorization has mismatched component counts");
  }
  const ComplexVector c = f.tx_gains.cwiseProduct(f.rx_gains);
  return f.rx_phases * c.asDiagonal() * f.tx_phases.transpose();
}

ComplexMatrix reconstruct(const DigitalFactorization& f) {
  if (f.tx.cols() != f.rx.cols()) {
    throw DimensionError("digital factorization has mismatched component counts");
  }
  return f.rx * f.tx.transpose();
}

AnalogFactorization with_unit_tx_gains(AnalogFactorization f) {
  f.rx_gains = f.tx_gains.cwiseProduct(f.rx_gains);
  f.tx_gains = ComplexVector::Ones(f.tx_gains.size());
  return f;
}

namespace {

double residual_norm(const ComplexMatrix& measurement, const ComplexVector& psi,
                     const DigitalFactorization& f) {
  return (psi - measurement * vec(reconstruct(f))).norm();
}

ComplexVector least_squares(const ComplexMatrix& m, const ComplexVector& rhs) {
  return m.completeOrthogonalDecomposition().solve(rhs);
}

DigitalFit fit_once(const ComplexMatrix& measurement, const ComplexVector& psi, Index n_tx,
                    Index n_rx, Index q, const DigitalFitOptions& opts, std::uint64_t seed) {
  RandomStream rng(seed);
  ComplexMatrix tx(n_tx, q);
  for (Index i = 0; i < tx.size(); ++i) tx.data()[i] = Complex(rng.normal(), rng.normal());
  ComplexMatrix rx = ComplexMatrix::Zero(n_rx, q);

  const ComplexMatrix eye_rx = ComplexMatrix::Identity(n_rx, n_rx);
  const ComplexMatrix eye_tx = ComplexMatrix::Identity(n_tx, n_tx);
  const double target = opts.tolerance * psi.norm();

  DigitalFit fit{{tx, rx}, std::numeric_limits<double>::infinity(), 0};
  for (int it = 1; it <= opts.max_iterations; ++it) {
    // vec(W_r W_t^T) = (W_t kron I) vec(W_r) = (I kron W_r) vec(W_t^T)
    rx = mat(least_squares(measurement * kronecker(tx, eye_rx), psi), n_rx, q);
    tx = mat(least_squares(measurement * kronecker(eye_tx, rx), psi), q, n_tx).transpose();
    const DigitalFactorization current{tx, rx};
    const double r = residual_norm(measurement, psi, current);
    const bool improved = r < fit.residual * (1.0 - 1e-12);
    if (r < fit.residual) {
      fit = {current, r, it};
    } else {
      fit.iterations = it;
    }
    if (r <= target || (!improved && it > 50)) break;
  }
  return fit;
}

}  // namespace

DigitalFit fit_digital(const ComplexMatrix& measurement, const ComplexVector& psi, Index n_tx,
                       Index n_rx, Index q, const DigitalFitOptions& opts) {
  if (measurement.cols() != n_tx * n_rx || measurement.rows() != psi.size()) {
    throw DimensionError("fit_digital: measurement matrix does not match psi and array sizes");
  }
  if (q < 1) throw std::invalid_argument("fit_digital: q must be >= 1");
  DigitalFit best{{ComplexMatrix::Zero(n_tx, q), ComplexMatrix::Zero(n_rx, q)},
                  std::numeric_limits<double>::infinity(), 0};
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    const std::uint64_t seed = RandomStream::derive(
        {opts.seed, static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(r)});
    DigitalFit fit = fit_once(measurement, psi, n_tx, n_rx, q, opts, seed);
    if (fit.residual < best.residual) best = std::move(fit);
    if (best.residual <= opts.tolerance * psi.norm()) break;
  }
  return best;
}

DigitalFit min_rank_digital_fit(const ComplexMatrix& measurement, const ComplexVector& psi,
                                Index n_tx, Index n_rx, double max_residual, Index q_max,
                                const DigitalFitOptions& opts) {
  if (q_max < 1) throw std::invalid_argument("min_rank_digital_fit: q_max must be >= 1");
  if (psi.norm() <= max_residual) {
    return {{ComplexMatrix(n_tx, 0), ComplexMatrix(n_rx, 0)}, psi.norm(), 0};
  }
  DigitalFit fit;
  for (Index q = 1; q <= q_max; ++q) {
    fit = fit_digital(measurement, psi, n_tx, n_rx, q, opts);
    if (fit.residual <= max_residual) break;
  }
  return fit;
}

}  // namespace imgadd
