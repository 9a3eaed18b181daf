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

#include "imgadd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "imgadd/errors.hpp"
#include "imgadd/random.hpp"
#include "imgadd/svg.hpp"

namespace imgadd {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Length of the contiguous virtual array spanning the sum co-array.
std::size_t coarray_span(const ArrayGeometry& tx, const ArrayGeometry& rx) {
  const std::vector<double> sums = sum_coarray(tx, rx);
  return static_cast<std::size_t>(std::llround(sums.back() - sums.front())) + 1;
}

}  // namespace

ArrayGeometry ExperimentConfig::geometry() const {
  switch (array) {
    case ArrayKind::kUla: return ula(ula_elements);
    case ArrayKind::kMra7: return mra7();
    case ArrayKind::kCustom: return ArrayGeometry(custom_positions);
  }
  throw std::logic_error("unknown array kind");
}

void ExperimentConfig::validate() const {
  (void)geometry();
  if (mode == ComponentMode::kFixed && q < 1) throw std::invalid_argument("q must be >= 1");
  if (q_max && *q_max < 1) throw std::invalid_argument("q_max must be >= 1");
  if (target == TargetKind::kChebyshev && !(sidelobe_db > 0.0)) {
    throw std::invalid_argument("sidelobe_db must be > 0");
  }
  if (target == TargetKind::kFile && target_file.empty()) {
    throw std::invalid_argument("target = file needs target_file");
  }
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (design_points < 1 || eval_points < 1) throw std::invalid_argument("grid sizes must be >= 1");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig cfg;
  if (name == "ula11") {
    cfg.array = ArrayKind::kUla;
    cfg.ula_elements = 11;
  } else if (name == "mra7") {
    cfg.array = ArrayKind::kMra7;
  } else {
    throw ParseError("unknown preset '" + std::string(name) + "' (expected ula11 or mra7)");
  }
  return cfg;
}

ExperimentConfig apply_config(ExperimentConfig cfg, const io::KeyValueFile& kv) {
  static const std::set<std::string, std::less<>> known = {
      "array", "elements", "positions", "mode", "q", "q_max", "target", "sidelobe_db",
      "normalization", "target_file", "step_size", "max_iterations", "tolerance",
      "tolerance_mode", "restarts", "seed", "design_points", "eval_points", "noise_std"};
  for (const auto& [key, value] : kv.entries()) {
    if (!known.contains(key)) throw ParseError(kv.source() + ": unknown key '" + key + "'");
  }
  auto positive_int = [&](std::string_view key) {
    const long long v = kv.get_int(key);
    if (v < 1) throw ParseError(kv.source() + ": " + std::string(key) + " must be >= 1");
    return v;
  };

  if (kv.has("array")) {
    const std::string& a = kv.get("array");
    if (a == "ula") cfg.array = ArrayKind::kUla;
    else if (a == "mra7") cfg.array = ArrayKind::kMra7;
    else if (a == "custom") cfg.array = ArrayKind::kCustom;
    else throw ParseError(kv.source() + ": array must be ula, mra7 or custom");
  }
  if (kv.has("elements")) cfg.ula_elements = static_cast<std::size_t>(positive_int("elements"));
  if (kv.has("positions")) cfg.custom_positions = kv.get_doubles("positions");
  if (kv.has("mode")) {
    const std::string& m = kv.get("mode");
    if (m == "fixed") cfg.mode = ComponentMode::kFixed;
    else if (m == "minimize") cfg.mode = ComponentMode::kMinimize;
    else throw ParseError(kv.source() + ": mode must be fixed or minimize");
  }
  if (kv.has("q")) cfg.q = static_cast<Index>(positive_int("q"));
  if (kv.has("q_max")) cfg.q_max = static_cast<Index>(positive_int("q_max"));
  if (kv.has("target")) {
    const std::string& t = kv.get("target");
    if (t == "chebyshev") cfg.target = TargetKind::kChebyshev;
    else if (t == "file") cfg.target = TargetKind::kFile;
    else throw ParseError(kv.source() + ": target must be chebyshev or file");
  }
  if (kv.has("sidelobe_db")) cfg.sidelobe_db = kv.get_double("sidelobe_db");
  if (kv.has("normalization")) {
    const std::string& n = kv.get("normalization");
    if (n == "peak") cfg.normalization = PsfNormalization::kUnitPeak;
    else if (n == "weight") cfg.normalization = PsfNormalization::kUnitWeight;
    else throw ParseError(kv.source() + ": normalization must be peak or weight");
  }
  if (kv.has("target_file")) cfg.target_file = kv.get("target_file");
  if (kv.has("step_size")) cfg.step_size = kv.get_double("step_size");
  if (kv.has("max_iterations")) cfg.max_iterations = static_cast<int>(positive_int("max_iterations"));
  if (kv.has("tolerance")) cfg.tolerance = kv.get_double("tolerance");
  if (kv.has("tolerance_mode")) {
    const std::string& m = kv.get("tolerance_mode");
    if (m == "relative") cfg.tolerance_mode = ToleranceMode::kRelative;
    else if (m == "absolute") cfg.tolerance_mode = ToleranceMode::kAbsolute;
    else throw ParseError(kv.source() + ": tolerance_mode must be relative or absolute");
  }
  if (kv.has("restarts")) cfg.restarts = static_cast<int>(positive_int("restarts"));
  if (kv.has("seed")) {
    const long long s = kv.get_int("seed");
    if (s < 0) throw ParseError(kv.source() + ": seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (kv.has("design_points")) cfg.design_points = static_cast<std::size_t>(positive_int("design_points"));
  if (kv.has("eval_points")) cfg.eval_points = static_cast<std::size_t>(positive_int("eval_points"));
  if (kv.has("noise_std")) cfg.noise_std = kv.get_double("noise_std");

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(kv.source() + ": " + e.what());
  }
  return cfg;
}

DesignProblem build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  const ArrayGeometry geom = cfg.geometry();
  AngleGrid grid = uniform_grid(cfg.design_points);
  ComplexVector target;
  if (cfg.target == TargetKind::kChebyshev) {
    target = chebyshev_target(coarray_span(geom, geom), cfg.sidelobe_db, grid, cfg.normalization);
  } else {
    auto [file_grid, samples] = io::read_target(cfg.target_file);
    grid = std::move(file_grid);
    target = std::move(samples);
  }
  ComplexMatrix a = measurement_matrix(geom, geom, grid);
  const double tol = cfg.tolerance_mode == ToleranceMode::kRelative ? cfg.tolerance * target.norm()
                                                                     : cfg.tolerance;
  return {geom, geom, std::move(grid), std::move(a), std::move(target), tol};
}

AngleGrid evaluation_grid(const ExperimentConfig& cfg, const DesignProblem& problem) {
  if (cfg.target == TargetKind::kFile) return problem.grid;
  return uniform_grid(cfg.eval_points);
}

ComplexVector desired_psf(const ExperimentConfig& cfg, const DesignProblem& problem,
                          const AngleGrid& grid) {
  if (cfg.target == TargetKind::kFile) {
    if (grid.angles() != problem.grid.angles()) {
      throw std::invalid_argument("file targets are only known on their own grid");
    }
    return problem.target;
  }
  return chebyshev_target(coarray_span(problem.tx, problem.rx), cfg.sidelobe_db, grid,
                          cfg.normalization);
}

DigitalBaseline digital_baseline(const DesignProblem& problem, std::uint64_t seed) {
  const auto n_tx = static_cast<Index>(problem.tx.size());
  const auto n_rx = static_cast<Index>(problem.rx.size());
  DigitalFitOptions opts;
  opts.seed = seed;
  DigitalBaseline out;
  out.fit = min_rank_digital_fit(problem.measurement, problem.target, n_tx, n_rx,
                                 problem.tolerance, std::min(n_tx, n_rx), opts);
  out.coarray_weights = reconstruct(out.fit.factors);
  out.digital = digital_factorize(out.coarray_weights);
  out.analog = theorem1_factorize(out.digital);
  return out;
}

SolverConfig solver_config(const ExperimentConfig& cfg, const DesignProblem& problem) {
  SolverConfig s;
  s.step_size = cfg.step_size;
  s.max_iterations = cfg.max_iterations;
  s.tolerance = problem.tolerance;
  s.restarts = cfg.restarts;
  s.seed = cfg.seed;
  return s;
}

DesignResult run_design(const ExperimentConfig& cfg) {
  DesignProblem problem = build_problem(cfg);
  const SolverConfig scfg = solver_config(cfg, problem);
  const auto n_tx = static_cast<Index>(problem.tx.size());
  const auto n_rx = static_cast<Index>(problem.rx.size());

  Index q_max = cfg.q;
  BeamformerSolution sol;
  if (cfg.mode == ComponentMode::kFixed) {
    sol = solve_fixed_components(problem.measurement, problem.target, n_tx, n_rx, cfg.q, scfg);
  } else {
    q_max = cfg.q_max ? *cfg.q_max
                      : std::max<Index>(1, 4 * digital_baseline(problem, cfg.seed).digital.count());
    sol = minimize_components(problem.measurement, problem.target, n_tx, n_rx, q_max, scfg);
  }
  return {std::move(problem), std::move(sol), q_max};
}

double to_db(double magnitude, double reference, double floor_db) {
  if (!(reference > 0.0) || !(magnitude > 0.0)) return floor_db;
  return std::max(floor_db, 20.0 * std::log10(magnitude / reference));
}

io::CsvTable psf_table(const AngleGrid& grid, const ComplexVector& desired,
                       const ComplexVector& realized) {
  io::CsvTable table({"angle_rad", "angle_deg", "desired_re", "desired_im", "desired_db",
                      "realized_re", "realized_im", "realized_db"});
  const double ref = desired.cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<Index>(i);
    table.add_row({grid[i], grid[i] * kRadToDeg, desired(k).real(), desired(k).imag(),
                   to_db(std::abs(desired(k)), ref), realized(k).real(), realized(k).imag(),
                   to_db(std::abs(realized(k)), ref)});
  }
  return table;
}

std::string psf_plot(const AngleGrid& grid, const ComplexVector& desired,
                     const ComplexVector& realized, const std::string& title) {
  const double ref = desired.cwiseAbs().maxCoeff();
  svg::Series want{"desired", {}, {}, "#444444", true};
  svg::Series got{"realized", {}, {}, "#d62728", false};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<Index>(i);
    want.x.push_back(grid[i] * kRadToDeg);
    want.y.push_back(to_db(std::abs(desired(k)), ref));
    got.x.push_back(grid[i] * kRadToDeg);
    got.y.push_back(to_db(std::abs(realized(k)), ref));
  }
  svg::PlotOptions opts;
  opts.title = title;
  return svg::line_plot({want, got}, opts);
}

GradientCheckReport run_gradient_check(int instances, double h, std::uint64_t seed) {
  GradientCheckReport report;
  for (int n = 0; n < instances; ++n) {
    RandomStream rng(RandomStream::derive({seed, static_cast<std::uint64_t>(n)}));
    auto pick = [&](Index lo, Index hi) {
      return lo + static_cast<Index>(rng.uniform() * static_cast<double>(hi - lo + 1));
    };
    // N_t N_r > Q: otherwise range(K) = range(A) and J does not depend on the phases.
    Index n_tx = 1, n_rx = 1;
    while (n_tx * n_rx < 2) {
      n_tx = pick(1, 6);
      n_rx = pick(1, 6);
    }
    const Index q = pick(1, std::min<Index>(3, n_tx * n_rx - 1));
    const Index v = pick(q + 2, 20);
    ComplexMatrix a(v, n_tx * n_rx);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(rng.normal(), rng.normal());
    ComplexVector psi(v);
    for (Index i = 0; i < v; ++i) psi(i) = Complex(rng.normal(), rng.normal());
    const ComplexMatrix tx = random_phases(n_tx, q, RandomStream::derive({seed, 1000u + n, 0}));
    const ComplexMatrix rx = random_phases(n_rx, q, RandomStream::derive({seed, 1000u + n, 1}));

    const PhaseGradient g = objective_gradient(a, psi, tx, rx);
    const PhaseGradient fd = finite_difference_gradient(a, psi, tx, rx, h);
    const double num = std::sqrt((g.tx - fd.tx).squaredNorm() + (g.rx - fd.rx).squaredNorm());
    const double den = std::sqrt(fd.tx.squaredNorm() + fd.rx.squaredNorm());
    const double err = den > 0.0 ? num / den : num;
    report.relative_errors.push_back(err);
    report.max_relative_error = std::max(report.max_relative_error, err);
  }
  return report;
}

}  // namespace imgadd
