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

#include "imgadd/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "imgadd/errors.hpp"
#include "imgadd/random.hpp"

namespace imgadd {

void SolverConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw std::invalid_argument("step size must be a positive finite number");
  }
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (rank_tol && !(*rank_tol >= 0.0)) throw std::invalid_argument("rank_tol must be >= 0");
}

namespace {

void check_shapes(const ComplexMatrix& measurement, const ComplexVector& psi,
                  const ComplexMatrix& tx, const ComplexMatrix& rx) {
  if (tx.cols() != rx.cols()) {
    throw DimensionError("transmit and receive phase matrices need the same number of columns");
  }
  if (measurement.cols() != tx.rows() * rx.rows()) {
    throw DimensionError("measurement matrix has " + std::to_string(measurement.cols()) +
                         " columns, expected N_t*N_r = " + std::to_string(tx.rows() * rx.rows()));
  }
  if (measurement.rows() != psi.size()) {
    throw DimensionError("psi length does not match the measurement matrix rows");
  }
}

// Quantities shared by the objective and the gradient at one point.
struct Projection {
  ComplexMatrix k;
  ComplexVector gains;     // K^+ psi
  ComplexVector residual;  // psi - K K^+ psi
};

Projection project(const ComplexMatrix& measurement, const ComplexVector& psi,
                   const ComplexMatrix& tx, const ComplexMatrix& rx,
                   std::optional<double> rank_tol) {
  Projection p;
  p.k = measurement * khatri_rao(tx, rx);
  p.gains = pinv(p.k, rank_tol) * psi;
  p.residual = psi - p.k * p.gains;
  return p;
}

// Columns are vec(H_q) = A^T conj(g_q) with g = (K K^+ - I) psi (K^+ psi)^H.
ComplexMatrix contracted_measurement(const ComplexMatrix& measurement, const Projection& p) {
  const ComplexMatrix g = -p.residual * p.gains.adjoint();
  return measurement.transpose() * g.conjugate();
}

RealMatrix phase_gradient(const ComplexMatrix& f, const ComplexMatrix& chain) {
  return -2.0 * f.cwiseProduct(chain).imag();
}

ComplexMatrix tx_chain(const ComplexMatrix& h, const ComplexMatrix& rx, Index n_tx) {
  const Index n_rx = rx.rows();
  ComplexMatrix out(n_tx, rx.cols());
  for (Index q = 0; q < rx.cols(); ++q) {
    const Eigen::Map<const ComplexMatrix> hq(h.col(q).data(), n_rx, n_tx);
    out.col(q) = hq.transpose() * rx.col(q);
  }
  return out;
}

ComplexMatrix rx_chain(const ComplexMatrix& h, const ComplexMatrix& tx, Index n_rx) {
  const Index n_tx = tx.rows();
  ComplexMatrix out(n_rx, tx.cols());
  for (Index q = 0; q < tx.cols(); ++q) {
    const Eigen::Map<const ComplexMatrix> hq(h.col(q).data(), n_rx, n_tx);
    out.col(q) = hq * tx.col(q);
  }
  return out;
}

std::string divergence_message(double step_size, int iteration) {
  std::ostringstream msg;
  msg << "gradient descent diverged (non-finite objective or gradient) at iteration "
      << iteration << "; step size mu = " << step_size << " is too large";
  return msg.str();
}

}  // namespace

double objective(const ComplexMatrix& measurement, const ComplexVector& psi,
                 const ComplexMatrix& tx, const ComplexMatrix& rx,
                 std::optional<double> rank_tol) {
  check_shapes(measurement, psi, tx, rx);
  return project(measurement, psi, tx, rx, rank_tol).residual.squaredNorm();
}

PhaseGradient objective_gradient(const ComplexMatrix& measurement, const ComplexVector& psi,
                                 const ComplexMatrix& tx, const ComplexMatrix& rx,
                                 std::optional<double> rank_tol) {
  check_shapes(measurement, psi, tx, rx);
  const Projection p = project(measurement, psi, tx, rx, rank_tol);
  const ComplexMatrix h = contracted_measurement(measurement, p);
  return {phase_gradient(tx, tx_chain(h, rx, tx.rows())),
          phase_gradient(rx, rx_chain(h, tx, rx.rows()))};
}

PhaseGradient finite_difference_gradient(const ComplexMatrix& measurement,
                                         const ComplexVector& psi, const ComplexMatrix& tx,
                                         const ComplexMatrix& rx, double h,
                                         std::optional<double> rank_tol) {
  if (!(h > 0.0)) throw std::invalid_argument("finite difference step must be > 0");
  check_shapes(measurement, psi, tx, rx);

  const RealMatrix phi_t = phase_of(tx);
  const RealMatrix phi_r = phase_of(rx);
  auto j_at = [&](const RealMatrix& pt, const RealMatrix& pr) {
    return objective(measurement, psi, unit_modulus(pt), unit_modulus(pr), rank_tol);
  };

  PhaseGradient out{RealMatrix(tx.rows(), tx.cols()), RealMatrix(rx.rows(), rx.cols())};
  for (Index i = 0; i < phi_t.size(); ++i) {
    RealMatrix plus = phi_t, minus = phi_t;
    plus.data()[i] += h;
    minus.data()[i] -= h;
    out.tx.data()[i] = (j_at(plus, phi_r) - j_at(minus, phi_r)) / (2.0 * h);
  }
  for (Index i = 0; i < phi_r.size(); ++i) {
    RealMatrix plus = phi_r, minus = phi_r;
    plus.data()[i] += h;
    minus.data()[i] -= h;
    out.rx.data()[i] = (j_at(phi_t, plus) - j_at(phi_t, minus)) / (2.0 * h);
  }
  return out;
}

ComplexMatrix random_phases(Index rows, Index cols, std::uint64_t seed) {
  RandomStream rng(seed);
  RealMatrix phases(rows, cols);
  for (Index i = 0; i < phases.size(); ++i) {
    phases.data()[i] = 2.0 * std::numbers::pi * rng.uniform();
  }
  return unit_modulus(phases);
}

BeamformerSolution gradient_descent(const ComplexMatrix& measurement, const ComplexVector& psi,
                                    const ComplexMatrix& tx_init, const ComplexMatrix& rx_init,
                                    const SolverConfig& cfg, const SolverObserver& observer) {
  cfg.validate();
  check_shapes(measurement, psi, tx_init, rx_init);
  if (unit_modulus_deviation(tx_init) > 1e-9 || unit_modulus_deviation(rx_init) > 1e-9) {
    throw std::invalid_argument("initial phase matrices must be unit modulus");
  }

  const Index n_tx = tx_init.rows();
  const Index n_rx = rx_init.rows();
  RealMatrix phi_t = phase_of(tx_init);
  RealMatrix phi_r = phase_of(rx_init);
  ComplexMatrix f_t = unit_modulus(phi_t);
  ComplexMatrix f_r = unit_modulus(phi_r);

  Projection p = project(measurement, psi, f_t, f_r, cfg.rank_tol);
  double eps = p.residual.norm();
  if (!std::isfinite(eps)) throw NumericalError(divergence_message(cfg.step_size, 0));

  BeamformerSolution sol;
  sol.residual_history.reserve(static_cast<std::size_t>(cfg.max_iterations) + 1);
  sol.residual_history.push_back(eps);
  if (observer) observer({phi_t, phi_r, f_t, f_r, p.k, eps, 0});

  int k = 0;
  while (k < cfg.max_iterations && eps > cfg.tolerance) {
    const ComplexMatrix h = contracted_measurement(measurement, p);

    const RealMatrix grad_t = phase_gradient(f_t, tx_chain(h, f_r, n_tx));
    if (!grad_t.allFinite()) throw NumericalError(divergence_message(cfg.step_size, k + 1));
    phi_t -= cfg.step_size * grad_t;
    f_t = unit_modulus(phi_t);

    const RealMatrix grad_r = phase_gradient(f_r, rx_chain(h, f_t, n_rx));
    if (!grad_r.allFinite()) throw NumericalError(divergence_message(cfg.step_size, k + 1));
    phi_r -= cfg.step_size * grad_r;
    f_r = unit_modulus(phi_r);

    p = project(measurement, psi, f_t, f_r, cfg.rank_tol);
    eps = p.residual.norm();
    ++k;
    if (!std::isfinite(eps)) throw NumericalError(divergence_message(cfg.step_size, k));
    sol.residual_history.push_back(eps);
    if (observer) observer({phi_t, phi_r, f_t, f_r, p.k, eps, k});
  }

  const Index q = f_t.cols();
  sol.factors = {f_t, f_r, ComplexVector::Ones(q), p.gains, false};
  sol.residual = eps;
  sol.iterations = k;
  sol.converged = eps <= cfg.tolerance;
  sol.seed = cfg.seed;
  return sol;
}

BeamformerSolution solve_fixed_components(const ComplexMatrix& measurement,
                                          const ComplexVector& psi, Index n_tx, Index n_rx,
                                          Index q, const SolverConfig& cfg) {
  cfg.validate();
  if (q < 1) throw std::invalid_argument("number of component images must be >= 1");
  std::optional<BeamformerSolution> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    const auto uq = static_cast<std::uint64_t>(q);
    const auto ur = static_cast<std::uint64_t>(r);
    const ComplexMatrix tx = random_phases(n_tx, q, RandomStream::derive({cfg.seed, uq, ur, 0}));
    const ComplexMatrix rx = random_phases(n_rx, q, RandomStream::derive({cfg.seed, uq, ur, 1}));
    BeamformerSolution sol = gradient_descent(measurement, psi, tx, rx, cfg);
    sol.restart = r;
    if (!best || sol.residual < best->residual) best = std::move(sol);
  }
  return std::move(*best);
}

BeamformerSolution minimize_components(const ComplexMatrix& measurement, const ComplexVector& psi,
                                       Index n_tx, Index n_rx, Index q_max,
                                       const SolverConfig& cfg) {
  if (q_max < 1) throw std::invalid_argument("q_max must be >= 1");
  std::optional<BeamformerSolution> best;
  for (Index q = 1; q <= q_max; ++q) {
    BeamformerSolution sol = solve_fixed_components(measurement, psi, n_tx, n_rx, q, cfg);
    if (sol.converged) return sol;
    if (!best || sol.residual < best->residual) best = std::move(sol);
  }
  return std::move(*best);
}

ComplexVector realized_psf(const ComplexMatrix& measurement, const AnalogFactorization& factors) {
  const ComplexMatrix w = reconstruct(factors);
  if (measurement.cols() != w.size()) {
    throw DimensionError("measurement matrix does not match the factorization's array sizes");
  }
  return measurement * vec(w);
}

}  // namespace imgadd
