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
#include <optional>

#include "imgadd/linalg.hpp"

namespace imgadd {

/// W = sum_q rx.col(q) * tx.col(q)^T with arbitrary complex weights.
/// Column q of `tx` (N_t x Q_d) and `rx` (N_r x Q_d) form one component image.
struct DigitalFactorization {
  ComplexMatrix tx;
  ComplexMatrix rx;

  Index count() const noexcept { return tx.cols(); }
};

/// W = F_r diag(c_t o c_r) F_t^T with unit-modulus phase matrices.
struct AnalogFactorization {
  ComplexMatrix tx_phases;  ///< N_t x Q, unit modulus
  ComplexMatrix rx_phases;  ///< N_r x Q, unit modulus
  ComplexVector tx_gains;   ///< length Q
  ComplexVector rx_gains;   ///< length Q
  bool degenerate = false;  ///< some digital component was identically zero

  Index count() const noexcept { return tx_phases.cols(); }
};

/// Two unit-modulus vectors and a real gain with gain * (first + second) == w.
struct VectorSplit {
  ComplexVector first;
  ComplexVector second;
  double gain = 0.0;
  bool degenerate = false;
};

/// SVD-based fully digital factorization. The count equals the numerical rank
/// at rank_tol; singular values are folded into the receive weights and the
/// transmit weights are the conjugated right singular vectors.
DigitalFactorization digital_factorize(const ComplexMatrix& w,
                                       std::optional<double> rank_tol = {});

/// Splits w into two equal-gain unit-modulus vectors:
///   f_i = exp(j(arg w +/- acos(|w| / ||w||_inf))),  gain = ||w||_inf / 2.
/// A zero vector yields gain 0 with all-ones phases and `degenerate` set.
VectorSplit theorem1_vector_split(const ComplexVector& w);

/// Fully analog factorization with Q = 4 * Q_d. Component q (1-based) uses
/// digital component ceil(q/4); the receive split takes branch
/// ceil((1 + (q-1) mod 4) / 2) and the transmit split takes branch 1 + (q-1) mod 2.
AnalogFactorization theorem1_factorize(const DigitalFactorization& digital);

/// F_r diag(c_t o c_r) F_t^T.
ComplexMatrix reconstruct(const AnalogFactorization& f);

/// sum_q rx_q tx_q^T.
ComplexMatrix reconstruct(const DigitalFactorization& f);

/// Moves all gain to the receive side: c_r <- c_t o c_r, c_t <- 1.
AnalogFactorization with_unit_tx_gains(AnalogFactorization f);

/// Options for fitting a rank-Q digital co-array matrix to a desired PSF.
struct DigitalFitOptions {
  int max_iterations = 5000;
  double tolerance = 1e-12;  ///< stop when ||psi - A vec(W)|| <= tolerance * ||psi||
  int restarts = 3;
  std::uint64_t seed = 0;
};

struct DigitalFit {
  DigitalFactorization factors;
  double residual = 0.0;  ///< ||psi - A vec(W)||_2
  int iterations = 0;
};

/// Fits W = W_r W_t^T (rank <= q) to psi by alternating linear least squares
/// over the receive and transmit weights; keeps the best of opts.restarts
/// random starts.
DigitalFit fit_digital(const ComplexMatrix& measurement, const ComplexVector& psi, Index n_tx,
                       Index n_rx, Index q, const DigitalFitOptions& opts = {});

/// Smallest q <= q_max whose digital fit reaches `max_residual`; returns the
/// best fit at q_max when none does (check `residual`).
DigitalFit min_rank_digital_fit(const ComplexMatrix& measurement, const ComplexVector& psi,
                                Index n_tx, Index n_rx, double max_residual, Index q_max,
                                const DigitalFitOptions& opts = {});

}  // namespace imgadd
