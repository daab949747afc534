#pragma once

// Matrix spectral factorization S = chi+ (chi+)*.
//
//   1. S = A A* pointwise, A lower triangular with nonnegative diagonal.
//   2. M = A diag(u_j) with u_j = f_j^+ / f_jj, making the diagonal outer.
//   3. For m = 2..r, M_m = M_{m-1} V_m where V_m = diag(U_m, I_{r-m}) and U_m
//      is the unitary completion of the last row of the leading m x m block.
//      After stage m that block is analytic.
//   4. chi+ = M_r, right-multiplied by a constant unitary so chi+(0) > 0.

#include <cstdint>
#include <vector>

#include "specfact/completion.hpp"
#include "specfact/fourier.hpp"
#include "specfact/triangular.hpp"

namespace specfact {

struct FactorizationConfig {
  int grid_size = kDefaultGridSize;
  double tau_total = 1e-6;
  double tau_analytic = kAnalyticTolerance;
  int n0 = 0;     ///< initial truncation order; 0 measures it from the tails
  int n_max = 0;  ///< refinement cap; 0 selects K/4
  std::uint64_t seed = 0;

  int effective_n_max() const noexcept { return n_max > 0 ? n_max : grid_size / 4; }
};

struct StageReport {
  int m = 0;
  int order = 0;
  int attempts = 0;
  double residual = 0;        ///< negative energy of the new leading block, relative
  double dropped_tail = 0;    ///< l2 norm of tail coefficients below -N, relative
  double rank_gap = 1;
  double gram_deviation = 0;  ///< relative to max |B|
};

/// Input to stage m: M holds M_{m-1}, whose leading (m-1) x (m-1) block is
/// analytic. Products are formed on grid_size samples and the matrix lives on
/// full_band(grid_size).
struct StageState {
  int m = 2;
  int grid_size = kDefaultGridSize;
  MatrixSeries matrix;
  int order = 4;
  std::vector<StageReport> diagnostics;
};

struct FactorizationResult {
  MatrixSeries chi_plus;
  MatrixSeries unnormalized;  ///< analytic part of M_r, before canonical_normalize
  double residual = 0;
  double neg_energy = 0;      ///< of M_r before truncation to its analytic part, relative
  double outer_defect = 0;    ///< of det chi+
  std::vector<StageReport> stages;
  CMatrix value_at_zero;
  std::vector<FourierSeries> diag_outer;  ///< f_j^+ of the triangular stage
  int grid_size = 0;
};

/// V = diag(U, I_{r-m}) as a Laurent series on [-N, N].
MatrixSeries embed_block(const UnitaryPolyMatrix& u, int r);

/// One completion stage at state.order. Returns the state for stage m + 1.
/// Throws StageResidual when the new leading block misses tau_analytic.
StageState run_stage(const StageState& state, double tau_analytic = kAnalyticTolerance);

/// Right-multiplies chi by the constant unitary that makes chi(0) Hermitian
/// positive definite. Throws CannotNormalize if chi(0) is singular.
MatrixSeries canonical_normalize(const MatrixSeries& chi);

/// Canonical spectral factor of a Hermitian positive semidefinite density
/// sampled on a power-of-two grid. Throws RefinementExhausted when a stage
/// misses tau_analytic at N = n_max.
FactorizationResult factorize(const GridMatrixFunction& s, const FactorizationConfig& config = {});

}  // namespace specfact
