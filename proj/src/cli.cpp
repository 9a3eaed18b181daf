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

#include "imgadd/cli.hpp"

#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "imgadd/errors.hpp"
#include "imgadd/experiment.hpp"
#include "imgadd/imaging.hpp"
#include "imgadd/io.hpp"
#include "imgadd/svg.hpp"

namespace imgadd {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::string preset;
  std::optional<long long> seed;
  std::string out = "out";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key = value experiment configuration");
  cmd->add_option("--preset", o.preset, "reference experiment settings")
      ->check(CLI::IsMember({"ula11", "mra7"}));
  cmd->add_option("--seed", o.seed, "random seed (overrides the config)");
  cmd->add_option("--out", o.out, "output directory");
}

ExperimentConfig resolve_config(const CommonOptions& o) {
  ExperimentConfig cfg = o.preset.empty() ? ExperimentConfig{} : preset_config(o.preset);
  if (!o.config.empty()) cfg = apply_config(cfg, io::KeyValueFile::load(o.config));
  if (o.seed) {
    if (*o.seed < 0) throw ParseError("--seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*o.seed);
  }
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::string array_name(const ExperimentConfig& cfg) {
  switch (cfg.array) {
    case ArrayKind::kUla: return "ULA(" + std::to_string(cfg.ula_elements) + ")";
    case ArrayKind::kMra7: return "MRA(7)";
    case ArrayKind::kCustom: return "custom array";
  }
  return "array";
}

int cmd_design(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = resolve_config(o);
  const fs::path dir = prepare_out(o.out);
  const DesignResult res = run_design(cfg);
  const BeamformerSolution& sol = res.solution;

  io::write_solution(dir / "solution.txt", {res.problem.tx, res.problem.rx, sol.factors,
                                            sol.residual, sol.iterations, sol.converged});

  io::CsvTable history({"iteration", "residual"});
  for (std::size_t k = 0; k < sol.residual_history.size(); ++k) {
    history.add_row({static_cast<double>(k), sol.residual_history[k]});
  }
  history.save(dir / "residuals.csv");

  const AngleGrid grid = evaluation_grid(cfg, res.problem);
  const ComplexVector desired = desired_psf(cfg, res.problem, grid);
  const ComplexVector realized =
      realized_psf(measurement_matrix(res.problem.tx, res.problem.rx, grid), sol.factors);
  psf_table(grid, desired, realized).save(dir / "psf.csv");
  io::write_text(dir / "psf.svg",
                 psf_plot(grid, desired, realized,
                          array_name(cfg) + ", Q = " + std::to_string(sol.q())));

  out << "Q = " << sol.q() << " (searched up to " << res.q_max << ")\n";
  out << "residual = " << io::format_double(sol.residual) << " (tolerance "
      << io::format_double(res.problem.tolerance) << ")\n";
  out << "iterations = " << sol.iterations << "\n";
  out << "converged = " << (sol.converged ? "true" : "false") << "\n";
  if (!sol.converged) {
    err << "warning: tolerance not reached; reporting the best solution found\n";
  }
  return kExitOk;
}

int cmd_factorize(const CommonOptions& o, const std::string& matrix_path,
                  const std::string& solution_path, std::ostream& out) {
  const fs::path dir = prepare_out(o.out);
  ComplexMatrix w;
  std::optional<ArrayGeometry> tx, rx;
  std::string source;

  if (!matrix_path.empty()) {
    w = io::read_complex_matrix(matrix_path);
    source = matrix_path;
  } else if (!solution_path.empty()) {
    const io::SolutionFile s = io::read_solution(solution_path);
    w = reconstruct(s.factors);
    tx = s.tx;
    rx = s.rx;
    source = solution_path;
  } else {
    const ExperimentConfig cfg = resolve_config(o);
    const DesignProblem problem = build_problem(cfg);
    const DigitalBaseline base = digital_baseline(problem, cfg.seed);
    w = base.coarray_weights;
    tx = problem.tx;
    rx = problem.rx;
    source = "target-matched digital fit of " + array_name(cfg) + " (residual " +
             io::format_double(base.fit.residual) + ")";
  }
  require_finite(w, "co-array weight matrix");
  if (!tx || static_cast<Index>(tx->size()) != w.cols()) tx = ula(static_cast<std::size_t>(w.cols()));
  if (!rx || static_cast<Index>(rx->size()) != w.rows()) rx = ula(static_cast<std::size_t>(w.rows()));

  const DigitalFactorization digital = digital_factorize(w);
  const AnalogFactorization analog = theorem1_factorize(digital);
  const ComplexMatrix rebuilt =
      analog.count() > 0 ? reconstruct(analog) : ComplexMatrix::Zero(w.rows(), w.cols());
  const double scale = w.norm();
  const double error = scale > 0.0 ? (rebuilt - w).norm() / scale : (rebuilt - w).norm();

  io::complex_matrix_table(w).save(dir / "coarray_weights.csv");
  io::CsvTable digital_table({"component", "side", "element", "re", "im"});
  for (Index q = 0; q < digital.count(); ++q) {
    for (Index n = 0; n < digital.tx.rows(); ++n) {
      digital_table.add_row({double(q), 0.0, double(n), digital.tx(n, q).real(), digital.tx(n, q).imag()});
    }
    for (Index n = 0; n < digital.rx.rows(); ++n) {
      digital_table.add_row({double(q), 1.0, double(n), digital.rx(n, q).real(), digital.rx(n, q).imag()});
    }
  }
  digital_table.save(dir / "digital.csv");
  io::write_solution(dir / "analog_solution.txt", {*tx, *rx, analog, 0.0, 0, true});

  std::string report;
  report += "# factorization report\n";
  report += "source = " + source + "\n";
  report += "q_digital = " + std::to_string(digital.count()) + "\n";
  report += "q_analog = " + std::to_string(analog.count()) + "\n";
  report += "reconstruction_error = " + io::format_double(error) + "\n";
  report += std::string("degenerate = ") + (analog.degenerate ? "true" : "false") + "\n";
  io::write_text(dir / "report.txt", report);
  out << report;
  return kExitOk;
}

int cmd_scan(const CommonOptions& o, const std::string& solution_path,
             const std::string& scene_path, std::ostream& out) {
  const ExperimentConfig cfg = resolve_config(o);
  const fs::path dir = prepare_out(o.out);
  const io::SolutionFile sol = io::read_solution(solution_path);
  const Scene scene = io::read_scene(scene_path, cfg.noise_std);
  const AngleGrid grid = uniform_grid(cfg.eval_points);
  const CompositeImage image = scan(scene, sol.tx, sol.rx, sol.factors, grid, cfg.seed);

  std::vector<std::string> header = {"angle_rad", "angle_deg", "composite_re", "composite_im",
                                     "composite_db"};
  for (std::size_t q = 0; q < image.components.size(); ++q) {
    header.push_back("component" + std::to_string(q + 1) + "_re");
    header.push_back("component" + std::to_string(q + 1) + "_im");
  }
  io::CsvTable table(header);
  const double ref = image.composite.size() ? image.composite.cwiseAbs().maxCoeff() : 0.0;
  svg::Series series{"composite", {}, {}, "#1f77b4", false};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<Index>(i);
    const double deg = grid[i] * 180.0 / std::numbers::pi;
    const double db = to_db(std::abs(image.composite(k)), ref);
    std::vector<double> row = {grid[i], deg, image.composite(k).real(), image.composite(k).imag(), db};
    for (const ComplexVector& c : image.components) {
      row.push_back(c(k).real());
      row.push_back(c(k).imag());
    }
    table.add_row(row);
    series.x.push_back(deg);
    series.y.push_back(db);
  }
  table.save(dir / "image.csv");
  svg::PlotOptions opts;
  opts.title = "composite image, Q = " + std::to_string(image.components.size());
  io::write_text(dir / "image.svg", svg::line_plot({series}, opts));

  out << "pixels = " << grid.size() << "\n";
  out << "components = " << image.components.size() << "\n";
  out << "measurements = " << grid.size() * image.components.size() << "\n";
  return kExitOk;
}

int cmd_check_grad(int instances, double h, long long seed, std::ostream& out) {
  if (instances < 1 || !(h > 0.0) || seed < 0) {
    throw ParseError("check-grad needs --instances >= 1, --step > 0 and --seed >= 0");
  }
  const GradientCheckReport report =
      run_gradient_check(instances, h, static_cast<std::uint64_t>(seed));
  out << "instances = " << instances << "\n";
  out << "max_relative_error = " << io::format_double(report.max_relative_error) << "\n";
  const bool ok = report.max_relative_error < 1e-5;
  out << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analog beamformer design with image addition"};
  app.require_subcommand(1);

  CommonOptions design_opts, factor_opts, scan_opts;
  auto* design = app.add_subcommand("design", "optimize analog weights for a desired PSF");
  add_common(design, design_opts);

  std::string matrix_path, factor_solution;
  auto* factorize = app.add_subcommand("factorize", "digital and closed-form analog factorizations");
  add_common(factorize, factor_opts);
  factorize->add_option("--matrix", matrix_path, "co-array weight matrix CSV (row,col,re,im)");
  factorize->add_option("--solution", factor_solution, "solution file written by design");

  std::string scan_solution, scene_path;
  auto* scan_cmd = app.add_subcommand("scan", "simulate a sequential scan with image addition");
  add_common(scan_cmd, scan_opts);
  scan_cmd->add_option("--solution", scan_solution, "solution file")->required();
  scan_cmd->add_option("--scene", scene_path, "scatterers CSV (angle_rad,re,im)")->required();

  int instances = 20;
  double step = 1e-6;
  long long grad_seed = 0;
  auto* check = app.add_subcommand("check-grad", "compare the analytic gradient with finite differences");
  check->add_option("--instances", instances, "number of random instances");
  check->add_option("--step", step, "finite difference step");
  check->add_option("--seed", grad_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*design) return cmd_design(design_opts, out, err);
    if (*factorize) return cmd_factorize(factor_opts, matrix_path, factor_solution, out);
    if (*scan_cmd) return cmd_scan(scan_opts, scan_solution, scene_path, out);
    if (*check) return cmd_check_grad(instances, step, grad_seed, out);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace imgadd
