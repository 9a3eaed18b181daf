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
#include <functional>
#include <optional>
#include <vector>

#include "imgadd/factorize.hpp"
#include "imgadd/linalg.hpp"

namespace imgadd {

struct SolverConfig {
  double step_size = 1e-3;   ///< mu
  int max_iterations = 10000;
  double tolerance = 0.0;    ///< absolute bound on ||(I - K K^+) psi||_2
  int restarts = 1;          ///< random initializations per Q
  std::uint64_t seed = 0;
  std::optional<double> rank_tol;  ///< pseudo-inverse cutoff; default_rank_tol() when empty

  /// Throws std::invalid_argument unless step_size > 0, max_iterations >= 1,
  /// tolerance >= 0 and restarts >= 1.
  void validate() const;
};

/// Snapshot handed to the iteration observer after every update.
struct SolverState {
  const RealMatrix& tx_phases;  ///< Phi_t
  const RealMatrix& rx_phases;  ///< Phi_r
  const ComplexMatrix& tx;      ///< F_t = exp(j Phi_t)
  const ComplexMatrix& rx;      ///< F_r = exp(j Phi_r)
  const ComplexMatrix& k;       ///< A (F_t kr F_r)
  double residual;              ///< ||(I - K K^+) psi||_2
  int iteration;
};

using SolverObserver = std::function<void(const SolverState&)>;

struct BeamformerSolution {
  AnalogFactorization factors;  ///< c_t is all ones, c_r = K^+ psi
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  ///< residual before the first update and after each one
  std::uint64_t seed = 0;                ///< base seed of the run
  int restart = 0;

  Index q() const noexcept { return factors.count(); }
};

/// Derivatives of J with respect to the transmit and receive phase matrices.
struct PhaseGradient {
  RealMatrix tx;  ///< N_t x Q
  RealMatrix rx;  ///< N_r x Q
};

/// J = ||(I - K K^+) psi||^2 with K = A (F_t kr F_r).
double objective(const ComplexMatrix& measurement, const ComplexVector& psi,
                 const ComplexMatrix& tx, const ComplexMatrix& rx,
                 std::optional<double> rank_tol = {});

/// Analytic gradient of objective() with respect to Phi_t and Phi_r, where
/// F_x = exp(j Phi_x):
///   grad_x = -2 Im{ F_x o mat((d_K J)(d_{F_x} K)) },
///   d_K J = vec^H((K K^+ - I) psi (K^+ psi)^H).
/// The Kronecker-structured derivative matrices are never formed: with
/// H_q = mat(A^T conj(g_q)), g_q the q-th column of (K K^+ - I) psi (K^+ psi)^H,
/// the transmit term is H_q^T f_{r,q} and the receive term is H_q f_{t,q}.
PhaseGradient objective_gradient(const ComplexMatrix& measurement, const ComplexVector& psi,
                                 const ComplexMatrix& tx, const ComplexMatrix& rx,
                                 std::optional<double> rank_tol = {});

/// Central differences of objective(), one phase entry at a time.
PhaseGradient finite_difference_gradient(const ComplexMatrix& measurement,
                                         const ComplexVector& psi, const ComplexMatrix& tx,
                                         const ComplexMatrix& rx, double h,
                                         std::optional<double> rank_tol = {});

/// rows x cols matrix exp(j Phi) with Phi i.i.d. uniform on [0, 2pi).
ComplexMatrix random_phases(Index rows, Index cols, std::uint64_t seed);

/// Fixed-Q gradient descent on the phases.
///
/// Each iteration evaluates d_K J once, then updates F_t and afterwards F_r
/// (the receive derivative sees the new F_t), refreshes K and the residual.
/// Iteration stops once the residual is <= cfg.tolerance or cfg.max_iterations
/// updates have been made. The residual of the initial phases is checked before
/// the first update, so an already-feasible start returns after 0 iterations.
///
/// Throws NumericalError if the objective or gradient becomes non-finite.
BeamformerSolution gradient_descent(const ComplexMatrix& measurement, const ComplexVector& psi,
                                    const ComplexMatrix& tx_init, const ComplexMatrix& rx_init,
                                    const SolverConfig& cfg, const SolverObserver& observer = {});

/// cfg.restarts random starts at a fixed Q; keeps the lowest residual
/// (ties go to the lower restart index).
BeamformerSolution solve_fixed_components(const ComplexMatrix& measurement,
                                          const ComplexVector& psi, Index n_tx, Index n_rx,
                                          Index q, const SolverConfig& cfg);

/// Smallest Q in 1..q_max whose best restart converges. When none does, the
/// lowest-residual run over all Q is returned with converged == false.
BeamformerSolution minimize_components(const ComplexMatrix& measurement, const ComplexVector& psi,
                                       Index n_tx, Index n_rx, Index q_max,
                                       const SolverConfig& cfg);

/// A vec(W) for the co-array matrix of `factors`.
ComplexVector realized_psf(const ComplexMatrix& measurement, const AnalogFactorization& factors);

}  // namespace imgadd
