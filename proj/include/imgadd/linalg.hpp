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

#include <complex>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace imgadd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thin SVD, m = left * diag(singular_values) * right^H.
/// Singular values are sorted in descending order.
struct SvdResult {
  ComplexMatrix left;
  RealVector singular_values;
  ComplexMatrix right;
};

/// Block (i, j) of the result is a(i, j) * b.
ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-wise Kronecker product: column q is kron(a.col(q), b.col(q)).
/// With a = F_t and b = F_r this gives vec(F_r diag(c) F_t^T) = khatri_rao(F_t, F_r) c.
ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b);

SvdResult svd(const ComplexMatrix& m);

/// max(rows, cols) * machine epsilon.
double default_rank_tol(Index rows, Index cols);

/// Moore-Penrose pseudo-inverse. Singular values <= rank_tol * sigma_max are
/// treated as zero. The default tolerance is default_rank_tol().
ComplexMatrix pinv(const ComplexMatrix& m, std::optional<double> rank_tol = {});

/// Number of singular values above rank_tol * sigma_max (0 for the zero matrix).
Index numerical_rank(const ComplexMatrix& m, std::optional<double> rank_tol = {});

/// Column-major vectorization (stacks the columns).
ComplexVector vec(const ComplexMatrix& m);

/// Inverse of vec(); throws DimensionError when v.size() != rows * cols.
ComplexMatrix mat(const ComplexVector& v, Index rows, Index cols);

bool all_finite(const ComplexMatrix& m);

/// Throws NumericalError naming `what` when m contains NaN or Inf.
void require_finite(const ComplexMatrix& m, std::string_view what);

/// Elementwise exp(j * phases).
ComplexMatrix unit_modulus(const RealMatrix& phases);

/// Elementwise argument.
RealMatrix phase_of(const ComplexMatrix& m);

/// Largest | |m_ij| - 1 | over all entries.
double unit_modulus_deviation(const ComplexMatrix& m);

}  // namespace imgadd
