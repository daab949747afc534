#pragma once

// Pointwise lower-triangular factorization S = A A* with nonnegative diagonal,
// followed by the diagonal outer correction M = A diag(u_1, ..., u_r) that
// makes every diagonal entry an outer analytic function.

#include <vector>

#include "specfact/fourier.hpp"
#include "specfact/scalar_outer.hpp"

namespace specfact {

/// Eigenvalue tolerance for semidefiniteness and the regularization shift.
inline constexpr double kPsdTolerance = 1e-12;
/// A density needing regularization on more than this fraction of samples is
/// treated as singular on a set of positive measure.
inline constexpr double kMaxRegularizedFraction = 0.125;

/// K lower-triangular matrices with real nonnegative diagonals.
struct LowerTriangularField {
  int dim = 0;
  std::vector<CMatrix> samples;
  /// Samples that were shifted by delta*I before factorization.
  std::vector<int> regularized;

  int grid_size() const noexcept { return static_cast<int>(samples.size()); }
};

/// M(z) of the recursion: lower triangular, outer analytic diagonal.
struct StartMatrix {
  MatrixSeries series;
  std::vector<OuterFactor> diag_outer;
};

/// Coefficient band used for the full-resolution representation of grid data:
/// K consecutive indices [-(K/2 - 1), K/2], a bijection with the K samples.
std::pair<int, int> full_band(int grid_size);

/// Per-sample Cholesky without pivoting.
///
/// Throws NotHermitian (naming the sample), NotPositiveSemidefinite when a
/// sample eigenvalue falls below -psd_tol * max_k ||S(z_k)||, and
/// DegenerateDensity when near-singular samples are not isolated.
LowerTriangularField pointwise_lower_cholesky(const GridMatrixFunction& s, double psd_tol = kPsdTolerance);

/// Multiplies column j of A by u_j = f_j^+ / f_jj and transforms to
/// coefficients on full_band(K). Diagonal entries are exactly the outer
/// factors' coefficient series. band_hi < 0 keeps the full band.
StartMatrix diagonal_outer_correction(const LowerTriangularField& a, int band_hi = -1);

}  // namespace specfact
