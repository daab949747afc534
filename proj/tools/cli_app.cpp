#include "cli_app.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "specfact/errors.hpp"
#include "specfact/io.hpp"
#include "specfact/recursion.hpp"
#include "specfact/verification.hpp"

namespace specfact::cli {

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RefinementExhausted:
    case ErrorKind::StageResidual:
    case ErrorKind::CompletionRankDeficiency:
    case ErrorKind::GramNotConstant:
    case ErrorKind::PinSingular:
    case ErrorKind::CannotNormalize:
      return kNonConvergence;
    default:
      return kInputError;
  }
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(1) << '\n';
  } else {
    write_json_file(path, j);
  }
}

// Density from either a grid document or a coefficient document sampled at K.
GridMatrixFunction load_density(const std::string& path, int grid_size) {
  const auto doc = read_json_file(path);
  if (is_grid_function(doc)) return grid_function_from_json(doc);
  const auto series = matrix_series_from_json(doc);
  const int reach = std::max(-series.lo(), series.hi());
  if (reach >= grid_size / 2) {
    throw Error(ErrorKind::BandOverflow, "coefficient band of " + path + " reaches index " + std::to_string(reach) +
                                             ", beyond K/2 = " + std::to_string(grid_size / 2) +
                                             "; rerun with a larger --grid");
  }
  auto density = coeffs_to_grid(series, grid_size);
  return density;
}

void write_curves(const std::string& prefix, const GridMatrixFunction& s, const MatrixSeries& chi) {
  const int k = s.grid_size();
  const auto values = coeffs_to_grid(chi, k);
  std::ofstream res(prefix + ".residual.csv");
  std::ofstream det(prefix + ".absdet.csv");
  res << "frequency,value\n";
  det << "frequency,value\n";
  res.precision(17);
  det.precision(17);
  const double scale = std::max(s.max_norm(), 1e-300);
  for (int i = 0; i < k; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(k);
    const CMatrix& x = values[i];
    res << f << ',' << (s[i] - x * x.adjoint()).norm() / scale << '\n';
    det << f << ',' << std::abs(x.determinant()) << '\n';
  }
}

struct FactorizeOptions {
  std::string input;
  std::string out;
  std::string report;
  std::string config;
  bool emit_plots = false;
  FactorizationConfig cfg;
};

int cmd_factorize(const FactorizeOptions& o, bool grid_given, std::ostream& out, std::ostream& err) {
  FactorizationConfig cfg = o.cfg;
  if (!o.config.empty()) cfg = config_from_json(read_json_file(o.config), cfg);
  const auto density = load_density(o.input, cfg.grid_size);
  if (grid_given && density.grid_size() != cfg.grid_size) {
    err << "note: input is sampled on K = " << density.grid_size() << "; --grid ignored\n";
  }
  cfg.grid_size = density.grid_size();

  const auto result = factorize(density, cfg);
  const auto report = full_report(density, result);
  emit(to_json(result), o.out, out);
  if (o.report.empty()) {
    err << to_json(report).dump(1) << '\n';
  } else {
    write_json_file(o.report, to_json(report));
  }
  if (o.emit_plots) write_curves(o.out.empty() ? std::string("factor") : o.out, density, result.chi_plus);

  if (result.residual > cfg.tau_total || result.neg_energy > cfg.tau_analytic) {
    err << "factorization missed tolerances: residual " << result.residual << ", negEnergy " << result.neg_energy
        << '\n';
    return kNonConvergence;
  }
  return kSuccess;
}

struct VerifyOptions {
  std::string density;
  std::string factor;
  std::string out;
  int grid_size = kDefaultGridSize;
  double tol_total = 1e-6;
  double tol_analytic = kAnalyticTolerance;
  double tol_outer = 1e-6;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  const auto density = load_density(o.density, o.grid_size);
  const auto chi = matrix_series_from_json(read_json_file(o.factor));
  if (chi.dim() != density.dim()) {
    throw Error(ErrorKind::InvalidArgument, "density is " + std::to_string(density.dim()) + "x" +
                                                std::to_string(density.dim()) + " but factor is " +
                                                std::to_string(chi.dim()) + "x" + std::to_string(chi.dim()));
  }
  const auto report = verify_factor(density, chi);
  emit(to_json(report), o.out, out);
  const bool ok = report.residual <= o.tol_total && report.neg_energy <= o.tol_analytic &&
                  report.outer_defect <= o.tol_outer;
  if (!ok) {
    err << "verification failed: residual " << report.residual << ", negEnergy " << report.neg_energy
        << ", outerDefect " << report.outer_defect << '\n';
    return kVerificationFailure;
  }
  return kSuccess;
}

struct GenerateOptions {
  int r = 2;
  int degree = 4;
  std::uint64_t seed = 0;
  double margin = 0.4;
  int grid_size = kDefaultGridSize;
  std::string out = "density";
};

int cmd_generate(const GenerateOptions& o, std::ostream& err) {
  const auto td = generate_test_density(o.r, o.degree, o.seed, o.margin, o.grid_size);
  write_json_file(o.out + "_S.json", to_json(td.density));
  write_json_file(o.out + "_chi.json", to_json(td.factor));
  err << "self-check: residual " << residual(td.density, td.factor) << ", outerDefect "
      << determinant_outer_defect(td.factor, o.grid_size) << '\n';
  return kSuccess;
}

struct CompareOptions {
  std::string first;
  std::string second;
  std::string out;
  double tol = 1e-6;
};

int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  const auto chi1 = matrix_series_from_json(read_json_file(o.first));
  const auto chi2 = matrix_series_from_json(read_json_file(o.second));
  if (chi1.dim() != chi2.dim()) throw Error(ErrorKind::InvalidArgument, "factors differ in dimension");
  const auto report = unitary_equivalence(chi1, chi2);
  emit(to_json(report), o.out, out);
  if (report.unitarity_defect > o.tol || report.match_defect > o.tol) {
    err << "factors are not unitarily equivalent: unitarityDefect " << report.unitarity_defect << ", matchDefect "
        << report.match_defect << '\n';
    return kComparisonFailure;
  }
  return kSuccess;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical spectral factorization of matrix spectral densities"};
  app.require_subcommand(1);

  FactorizeOptions fo;
  auto* fac = app.add_subcommand("factorize", "Compute the canonical spectral factor of a density");
  fac->add_option("input", fo.input, "Density JSON (grid samples or coefficients)")->required()->check(CLI::ExistingFile);
  auto* grid_opt = fac->add_option("--grid", fo.cfg.grid_size, "Grid size K for coefficient inputs");
  fac->add_option("--tol-total", fo.cfg.tau_total, "Reconstruction tolerance");
  fac->add_option("--tol-analytic", fo.cfg.tau_analytic, "Per-stage analyticity tolerance");
  fac->add_option("--n0", fo.cfg.n0, "Initial truncation order (0 = measured)");
  fac->add_option("--n-max", fo.cfg.n_max, "Maximum truncation order (0 = K/4)");
  fac->add_option("--seed", fo.cfg.seed, "Seed (recorded; the pipeline is deterministic)");
  fac->add_option("--config", fo.config, "Config JSON with keys K, tauTotal, tauAnalytic, N0, Nmax, seed")
      ->check(CLI::ExistingFile);
  fac->add_flag("--emit-plots", fo.emit_plots, "Write residual and |det| curves as CSV");
  fac->add_option("--out", fo.out, "Factor JSON path (default stdout)");
  fac->add_option("--report", fo.report, "Report JSON path (default stderr)");

  VerifyOptions vo;
  auto* ver = app.add_subcommand("verify", "Check a factor against a density");
  ver->add_option("density", vo.density, "Density JSON")->required()->check(CLI::ExistingFile);
  ver->add_option("factor", vo.factor, "Factor JSON (MatrixSeries)")->required()->check(CLI::ExistingFile);
  ver->add_option("--grid", vo.grid_size, "Grid size K for coefficient densities");
  ver->add_option("--tol-total", vo.tol_total, "Reconstruction tolerance");
  ver->add_option("--tol-analytic", vo.tol_analytic, "Negative-energy tolerance");
  ver->add_option("--tol-outer", vo.tol_outer, "Outer-determinant tolerance");
  ver->add_option("--out", vo.out, "Report JSON path (default stdout)");

  GenerateOptions go;
  auto* gen = app.add_subcommand("generate", "Write a synthetic density with a known factor");
  gen->add_option("--r", go.r, "Dimension")->check(CLI::Range(1, 64));
  gen->add_option("--degree", go.degree, "Polynomial degree")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", go.seed, "Random seed");
  gen->add_option("--margin", go.margin, "Perturbation size in [0, 1)");
  gen->add_option("--grid", go.grid_size, "Grid size K");
  gen->add_option("--out", go.out, "Output prefix; writes <prefix>_S.json and <prefix>_chi.json");

  CompareOptions co;
  auto* cmp = app.add_subcommand("compare", "Find the constant matrix relating two factors");
  cmp->add_option("first", co.first, "Factor JSON")->required()->check(CLI::ExistingFile);
  cmp->add_option("second", co.second, "Factor JSON")->required()->check(CLI::ExistingFile);
  cmp->add_option("--tol", co.tol, "Defect tolerance");
  cmp->add_option("--out", co.out, "Report JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (fac->parsed()) return cmd_factorize(fo, grid_opt->count() > 0, out, err);
    if (ver->parsed()) return cmd_verify(vo, out, err);
    if (gen->parsed()) return cmd_generate(go, err);
    if (cmp->parsed()) return cmd_compare(co, out, err);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace specfact::cli
