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

#include "imgadd/linalg.hpp"
#include "imgadd/random.hpp"

namespace imgadd::testing {

/// i.i.d. standard complex Gaussian entries.
inline ComplexMatrix random_complex(Index rows, Index cols, std::uint64_t seed) {
  RandomStream rng(seed);
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      m(i, j) = Complex(re, rng.normal());
    }
  }
  return m;
}

inline double relative_error(const ComplexMatrix& got, const ComplexMatrix& want) {
  const double scale = want.norm();
  return scale > 0.0 ? (got - want).norm() / scale : (got - want).norm();
}

}  // namespace imgadd::testing
