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

#include <doctest.h>

#include <limits>

#include "imgadd/errors.hpp"
#include "imgadd/linalg.hpp"
#include "test_support.hpp"

using namespace imgadd;
using imgadd::testing::random_complex;
using imgadd::testing::relative_error;

namespace {

const Complex kJ{0.0, 1.0};

// Entry-by-entry Kronecker product, independent of the library routine.
ComplexMatrix kron_loops(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace

TEST_CASE("kronecker of identities is the identity") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(kronecker(i2, i2).isApprox(ComplexMatrix::Identity(4, 4)));
}

TEST_CASE("kronecker of a column and a row") {
  ComplexMatrix a(2, 1), b(1, 2), want(2, 2);
  a << 1.0, kJ;
  b << 1.0, -1.0;
  want << 1.0, -1.0, kJ, -kJ;
  CHECK((kronecker(a, b) - want).norm() == doctest::Approx(0.0));
}

TEST_CASE("kronecker agrees with the entrywise definition") {
  const ComplexMatrix a = random_complex(3, 2, 1);
  const ComplexMatrix b = random_complex(2, 4, 2);
  CHECK(relative_error(kronecker(a, b), kron_loops(a, b)) < 1e-15);
}

TEST_CASE("mixed-product property") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix a = random_complex(2, 2, 10 * s + 1);
    const ComplexMatrix b = random_complex(2, 2, 10 * s + 2);
    const ComplexMatrix c = random_complex(2, 2, 10 * s + 3);
    const ComplexMatrix d = random_complex(2, 2, 10 * s + 4);
    const ComplexMatrix lhs = kronecker(a, b) * kronecker(c, d);
    const ComplexMatrix rhs = kronecker(a * c, b * d);
    CHECK(relative_error(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("khatri_rao") {
  SUBCASE("single columns collapse to the Kronecker product") {
    const ComplexMatrix a = random_complex(3, 1, 5);
    const ComplexMatrix b = random_complex(4, 1, 6);
    CHECK(relative_error(khatri_rao(a, b), kronecker(a, b)) < 1e-15);
  }
  SUBCASE("a row of ones leaves the other factor unchanged") {
    const ComplexMatrix ones = ComplexMatrix::Ones(1, 3);
    const ComplexMatrix f = random_complex(5, 3, 7);
    CHECK(relative_error(khatri_rao(ones, f), f) < 1e-15);
  }
  SUBCASE("vec of an outer product") {
    const ComplexVector ft = random_complex(6, 1, 8);
    const ComplexVector fr = random_complex(4, 1, 9);
    const ComplexMatrix outer = fr * ft.transpose();
    CHECK(relative_error(khatri_rao(ft, fr), vec(outer)) < 1e-15);
  }
  SUBCASE("weighted sum of outer products") {
    const Index q = 3;
    const ComplexMatrix ft = random_complex(5, q, 10);
    const ComplexMatrix fr = random_complex(4, q, 11);
    const ComplexVector c = random_complex(q, 1, 12);
    ComplexMatrix w = ComplexMatrix::Zero(4, 5);
    for (Index k = 0; k < q; ++k) w += c(k) * fr.col(k) * ft.col(k).transpose();
    CHECK(relative_error(khatri_rao(ft, fr) * c, vec(w)) < 1e-14);
  }
  SUBCASE("column count mismatch") {
    CHECK_THROWS_AS(khatri_rao(ComplexMatrix::Ones(2, 2), ComplexMatrix::Ones(2, 3)),
                    DimensionError);
  }
}

TEST_CASE("svd reconstruction") {
  for (Index n : {1, 3, 10, 50}) {
    const ComplexMatrix m = random_complex(n, n > 3 ? n - 2 : n, static_cast<std::uint64_t>(n));
    const SvdResult s = svd(m);
    const ComplexMatrix rebuilt =
        s.left * s.singular_values.cast<Complex>().asDiagonal() * s.right.adjoint();
    CHECK(relative_error(rebuilt, m) < 1e-10);
    for (Index k = 1; k < s.singular_values.size(); ++k) {
      CHECK(s.singular_values(k) <= s.singular_values(k - 1));
    }
  }
}

TEST_CASE("pinv") {
  SUBCASE("identity") {
    const ComplexMatrix i3 = ComplexMatrix::Identity(3, 3);
    CHECK(relative_error(pinv(i3), i3) < 1e-15);
  }
  SUBCASE("rank-deficient diagonal") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    ComplexMatrix want = ComplexMatrix::Zero(2, 2);
    want(0, 0) = 0.5;
    CHECK((pinv(d) - want).norm() < 1e-15);
  }
  SUBCASE("Penrose conditions") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const ComplexMatrix m = random_complex(5, 3, 100 + s);
      const ComplexMatrix p = pinv(m);
      CHECK((m * p * m - m).norm() < 1e-10);
      CHECK((p * m * p - p).norm() < 1e-10);
      CHECK(((m * p).adjoint() - m * p).norm() < 1e-10);
      CHECK(((p * m).adjoint() - p * m).norm() < 1e-10);
    }
  }
  SUBCASE("zero matrix") {
    CHECK(pinv(ComplexMatrix::Zero(3, 2)).norm() == 0.0);
  }
}

TEST_CASE("numerical_rank") {
  const ComplexMatrix u = random_complex(6, 2, 20);
  const ComplexMatrix v = random_complex(5, 2, 21);
  CHECK(numerical_rank(u * v.transpose()) == 2);
  CHECK(numerical_rank(ComplexMatrix::Zero(4, 4)) == 0);
  CHECK(numerical_rank(ComplexMatrix::Identity(3, 3)) == 3);
}

TEST_CASE("vec and mat") {
  ComplexMatrix m(2, 2);
  m << 1.0, 3.0, 2.0, 4.0;
  ComplexVector want(4);
  want << 1.0, 2.0, 3.0, 4.0;
  CHECK(vec(m) == want);

  const ComplexMatrix r = random_complex(4, 7, 30);
  CHECK(mat(vec(r), 4, 7) == r);
  CHECK_THROWS_AS(mat(vec(r), 5, 5), DimensionError);
}

TEST_CASE("separable PSF identity") {
  const ComplexVector at = random_complex(5, 1, 40);
  const ComplexVector ar = random_complex(3, 1, 41);
  const ComplexVector wt = random_complex(5, 1, 42);
  const ComplexVector wr = random_complex(3, 1, 43);
  const Complex lhs = (kronecker(at, ar).transpose() * vec(wr * wt.transpose())).value();
  const Complex rhs = (at.transpose() * wt).value() * (ar.transpose() * wr).value();
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("unit modulus helpers") {
  RealMatrix phases(2, 2);
  phases << 0.0, 1.0, -2.0, 7.0;
  const ComplexMatrix f = unit_modulus(phases);
  CHECK(unit_modulus_deviation(f) < 1e-15);
  CHECK(unit_modulus_deviation(2.0 * f) == doctest::Approx(1.0));
  CHECK((unit_modulus(phase_of(f)) - f).norm() < 1e-14);
}

TEST_CASE("finiteness checks") {
  ComplexMatrix m = ComplexMatrix::Ones(2, 2);
  CHECK(all_finite(m));
  CHECK_NOTHROW(require_finite(m, "m"));
  m(1, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_FALSE(all_finite(m));
  CHECK_THROWS_AS(require_finite(m, "m"), NumericalError);
}
