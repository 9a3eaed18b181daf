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

#include "imgadd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imgadd/errors.hpp"

namespace imgadd {

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("khatri_rao: column counts differ (" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.cols()) + ")");
  }
  ComplexMatrix out(a.rows() * b.rows(), a.cols());
  for (Index q = 0; q < a.cols(); ++q) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.col(q).segment(i * b.rows(), b.rows()) = a(i, q) * b.col(q);
    }
  }
  return out;
}

SvdResult svd(const ComplexMatrix& m) {
  // JacobiSVD returns singular values already sorted in decreasing order.
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

double default_rank_tol(Index rows, Index cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

namespace {

double resolve_tol(const ComplexMatrix& m, std::optional<double> rank_tol) {
  const double tol = rank_tol.value_or(default_rank_tol(m.rows(), m.cols()));
  if (!(tol >= 0.0)) {
    throw std::invalid_argument("rank tolerance must be nonnegative");
  }
  return tol;
}

}  // namespace

ComplexMatrix pinv(const ComplexMatrix& m, std::optional<double> rank_tol) {
  const double tol = resolve_tol(m, rank_tol);
  ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  const SvdResult s = svd(m);
  const double cutoff = tol * s.singular_values(0);
  for (Index k = 0; k < s.singular_values.size(); ++k) {
    const double sigma = s.singular_values(k);
    if (sigma <= cutoff || sigma == 0.0) break;
    out.noalias() += (s.right.col(k) / sigma) * s.left.col(k).adjoint();
  }
  return out;
}

Index numerical_rank(const ComplexMatrix& m, std::optional<double> rank_tol) {
  const double tol = resolve_tol(m, rank_tol);
  if (m.size() == 0) return 0;
  const RealVector sv = svd(m).singular_values;
  const double cutoff = tol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
  return rank;
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix mat(const ComplexVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw DimensionError("mat: length " + std::to_string(v.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw NumericalError(std::string(what) + " contains non-finite entries");
  }
}

ComplexMatrix unit_modulus(const RealMatrix& phases) {
  ComplexMatrix out(phases.rows(), phases.cols());
  for (Index i = 0; i < phases.size(); ++i) {
    out.data()[i] = std::polar(1.0, phases.data()[i]);
  }
  return out;
}

RealMatrix phase_of(const ComplexMatrix& m) {
  return m.unaryExpr([](const Complex& z) { return std::arg(z); });
}

double unit_modulus_deviation(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Index i = 0; i < m.size(); ++i) {
    worst = std::max(worst, std::abs(std::abs(m.data()[i]) - 1.0));
  }
  return worst;
}

}  // namespace imgadd
