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
#include <string>
#include <string_view>
#include <vector>

#include "imgadd/array_model.hpp"
#include "imgadd/factorize.hpp"
#include "imgadd/io.hpp"
#include "imgadd/solver.hpp"

namespace imgadd {

enum class ArrayKind { kUla, kMra7, kCustom };
enum class ComponentMode { kFixed, kMinimize };
enum class TargetKind { kChebyshev, kFile };
enum class ToleranceMode { kRelative, kAbsolute };

/// Everything needed to reproduce one design run. The same geometry is used
/// for transmit and receive.
struct ExperimentConfig {
  ArrayKind array = ArrayKind::kUla;
  std::size_t ula_elements = 11;
  std::vector<double> custom_positions;

  ComponentMode mode = ComponentMode::kMinimize;
  Index q = 1;                  ///< used in fixed mode
  std::optional<Index> q_max;   ///< minimize mode; defaults to 4 * Q_d

  TargetKind target = TargetKind::kChebyshev;
  double sidelobe_db = 40.0;
  PsfNormalization normalization = PsfNormalization::kUnitWeight;
  std::string target_file;

  double step_size = 1e-3;
  int max_iterations = 10000;
  double tolerance = 1e-4;
  ToleranceMode tolerance_mode = ToleranceMode::kRelative;
  int restarts = 1;
  std::uint64_t seed = 0;

  std::size_t design_points = 99;
  std::size_t eval_points = 200;
  double noise_std = 0.0;

  ArrayGeometry geometry() const;
  /// Throws std::invalid_argument when a field violates the preconditions of
  /// the operation it feeds.
  void validate() const;
};

/// "ula11" or "mra7": the reference experiment settings. Throws ParseError
/// for any other name.
ExperimentConfig preset_config(std::string_view name);

/// Overrides fields of `base` with the keys present in `kv`; unknown keys are
/// rejected with ParseError.
ExperimentConfig apply_config(ExperimentConfig base, const io::KeyValueFile& kv);

/// Sampled design problem: psi on the design grid, A, and the absolute tolerance.
struct DesignProblem {
  ArrayGeometry tx;
  ArrayGeometry rx;
  AngleGrid grid;
  ComplexMatrix measurement;
  ComplexVector target;
  double tolerance = 0.0;
};

DesignProblem build_problem(const ExperimentConfig& cfg);

/// Angles at which realized and desired PSFs are tabulated; the design grid
/// when the target comes from a file.
AngleGrid evaluation_grid(const ExperimentConfig& cfg, const DesignProblem& problem);

/// Desired PSF on `grid` (only defined for Chebyshev targets or the design grid).
ComplexVector desired_psf(const ExperimentConfig& cfg, const DesignProblem& problem,
                          const AngleGrid& grid);

/// Lowest-rank fully digital co-array matrix matching the target, its SVD
/// factorization and the closed-form analog factorization with 4 * Q_d images.
struct DigitalBaseline {
  DigitalFit fit;
  ComplexMatrix coarray_weights;
  DigitalFactorization digital;
  AnalogFactorization analog;
};

DigitalBaseline digital_baseline(const DesignProblem& problem, std::uint64_t seed = 0);

SolverConfig solver_config(const ExperimentConfig& cfg, const DesignProblem& problem);

struct DesignResult {
  DesignProblem problem;
  BeamformerSolution solution;
  Index q_max = 0;
};

/// Fixed-Q or Q-minimizing design. In minimize mode without an explicit
/// q_max the bound 4 * Q_d from the digital baseline is used.
DesignResult run_design(const ExperimentConfig& cfg);

/// dB of |value| / reference, floored at floor_db.
double to_db(double magnitude, double reference, double floor_db = -80.0);

/// angle_rad, angle_deg, desired_re, desired_im, desired_db, realized_re,
/// realized_im, realized_db. Both dB columns are relative to max |desired|.
io::CsvTable psf_table(const AngleGrid& grid, const ComplexVector& desired,
                       const ComplexVector& realized);

std::string psf_plot(const AngleGrid& grid, const ComplexVector& desired,
                     const ComplexVector& realized, const std::string& title);

struct GradientCheckReport {
  std::vector<double> relative_errors;  ///< ||analytic - fd||_F / ||fd||_F per instance
  double max_relative_error = 0.0;
};

/// Compares objective_gradient() with central differences on random complex
/// Gaussian instances with N_t, N_r <= 6, Q <= 3, Q < N_t N_r and V <= 20.
GradientCheckReport run_gradient_check(int instances, double h, std::uint64_t seed);

}  // namespace imgadd
