#pragma once

// Independent checks of a computed factor, and synthetic densities with known
// factors.

#include <cstdint>
#include <vector>

#include "specfact/fourier.hpp"
#include "specfact/recursion.hpp"

namespace specfact {

/// max_k ||S(z_k) - chi(z_k) chi(z_k)*||_F / max_k ||S(z_k)||_F.
double residual(const GridMatrixFunction& s, const MatrixSeries& chi);

/// outer_defect of det chi, from det chi(0) and det chi on grid_size samples.
double determinant_outer_defect(const MatrixSeries& chi, int grid_size);

/// chi(0) Hermitian (to tol relative) with strictly positive eigenvalues.
bool canonical_pin(const CMatrix& at_zero, double tol = 1e-10);

struct EquivalenceReport {
  CMatrix u;
  double unitarity_defect = 0;  ///< ||U U* - I||_F
  double match_defect = 0;      ///< ||chi1 - chi2 U|| / ||chi1||, coefficient l2
};

/// Least-squares constant U minimizing ||chi1 - chi2 U|| over the circle.
/// Reports how far U is from unitary; never asserts it. Throws
/// EquivalenceUndetermined when chi2 has a singular Gram matrix.
EquivalenceReport unitary_equivalence(const MatrixSeries& chi1, const MatrixSeries& chi2);

struct TestDensity {
  GridMatrixFunction density;
  MatrixSeries factor;
};

/// chi0 = c (I + margin P) with P a seeded random analytic polynomial of the
/// given degree, P(0) Hermitian, scaled so max |z|=1 ||P(z)||_2 = 1. For
/// margin < 1 det chi0 has no zeros in the closed disk and chi0(0) > 0.
/// S = chi0 chi0* on grid_size samples.
TestDensity generate_test_density(int r, int degree, std::uint64_t seed, double margin,
                                  int grid_size = kDefaultGridSize);

struct LogDetDiagnostic {
  double mean_abs_log = 0;  ///< mean_k |log det S(z_k)| after flooring
  bool floored = false;     ///< some sample needed the floor
};

LogDetDiagnostic log_det_diagnostic(const GridMatrixFunction& s);

struct VerificationReport {
  double residual = 0;
  double neg_energy = 0;
  double outer_defect = 0;
  bool canonical_pin = false;
  LogDetDiagnostic log_det;
  std::vector<StageReport> stages;
};

/// Checks an arbitrary candidate factor against a density.
VerificationReport verify_factor(const GridMatrixFunction& s, const MatrixSeries& chi);

/// verify_factor plus the stage diagnostics of a factorization run.
VerificationReport full_report(const GridMatrixFunction& s, const FactorizationResult& result);

}  // namespace specfact
