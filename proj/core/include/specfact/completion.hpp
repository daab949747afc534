#pragma once

// Polynomial unitary completion.
//
// Given the m x m matrix-function
//
//        [ 1                     ]
//   F =  [    ...                ]
//        [          1            ]
//        [ phi_1 ... phi_{m-1} f+]
//
// with phi_j supported on [-N, -1] and f+ outer, find U with analytic
// polynomial entries of degree <= N in rows 1..m-1, conjugated analytic
// polynomials in row m, U U* = I and det U = 1 on the circle, such that F U
// has no negative Fourier coefficients.
//
// A column of U is (x_1, ..., x_{m-1}, conj(x_m)). It must satisfy
//
//   (C1)   sum_j phi_j x_j + f+ conj(x_m)   analytic,
//   (C2_j) f+ conj(x_j) - phi_j x_m          analytic, j < m.
//
// For two solutions x, y these force f+ B(x, y) to be analytic, where
// B(x, y) = sum_{j<m} x_j conj(y_j) + conj(x_m) y_m is the pointwise inner
// product of the columns. B has band [-N, N] and f+ is outer, so B is an
// analytic polynomial; Hermitian symmetry then makes it constant. Any basis
// of the m-dimensional solution space therefore orthonormalizes with one
// constant m x m transform.

#include <vector>

#include "specfact/fourier.hpp"

namespace specfact {

inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kGramTolerance = 1e-9;
inline constexpr double kUnitaryTolerance = 1e-9;
inline constexpr double kAnalyticTolerance = 1e-8;

struct TruncatedTail {
  FourierSeries tail;     ///< band [-N, -1]; [-1, -1] zero series when N = 0
  double dropped_energy;  ///< l2 norm of the coefficients below -N
};

/// Principal part of phi restricted to indices -N..-1.
TruncatedTail truncate_tail(const FourierSeries& phi, int order);

/// Last row of F: m-1 tails on [-N, -1] and the outer diagonal entry.
struct LastRowData {
  int m = 0;
  int order = 0;
  std::vector<FourierSeries> tails;
  FourierSeries f_plus;

  /// Truncates each phi_j to its tail and caps f+ at degree 2N (coefficients
  /// beyond N - 1 cannot reach indices -N..-1). Throws InvalidArgument if f+
  /// is not analytic with f+(0) > 0.
  static LastRowData from_row(std::span<const FourierSeries> phi, const FourierSeries& f_plus, int order);

  /// F as an m x m Laurent series.
  MatrixSeries matrix() const;
};

/// Linear system whose null space holds the columns of U.
///
/// Unknown layout (length m(N+1)): coefficients 0..N of x_1, ..., x_{m-1},
/// then the coefficients w_0..w_N of the realized last entry
/// conj(x_m)(z) = sum_p w_p z^{-p}. Expressed this way the system is
/// complex-linear. Rows: N for (C1), then N for each (C2_j).
struct CompletionSystem {
  int m = 0;
  int order = 0;
  CMatrix matrix;
};

CompletionSystem assemble_system(const LastRowData& data);

struct NullspaceBasis {
  int m = 0;
  int order = 0;
  CMatrix basis;                    ///< m(N+1) x m, orthonormal columns
  Eigen::VectorXd singular_values;  ///< descending
  /// Smallest retained singular value over the largest; must exceed the rank tolerance.
  double rank_gap = 1.0;
};

/// Right singular vectors of the m smallest singular values. Throws
/// CompletionRankDeficiency if the null space is wider than m.
NullspaceBasis solve_nullspace(const CompletionSystem& system);

/// m x m polynomial unitary completion. Entries are stored as analytic
/// polynomials of degree <= N; the last row is realized on the circle as the
/// conjugate of its stored entries.
class UnitaryPolyMatrix {
 public:
  UnitaryPolyMatrix(int m, int order, std::vector<FourierSeries> stored);

  static UnitaryPolyMatrix identity(int m);

  int dim() const noexcept { return m_; }
  int order() const noexcept { return order_; }

  const FourierSeries& stored(int j, int k) const { return stored_[static_cast<std::size_t>(j * m_ + k)]; }
  /// Entry as a function on the circle (conjugated in the last row).
  FourierSeries realized(int j, int k) const;
  /// Realized matrix as a Laurent series on [-N, N].
  MatrixSeries realized_series() const;
  /// Realized matrix at K grid points.
  GridMatrixFunction boundary(int grid_size) const;

  /// Right multiplication by a constant matrix, applied to the realized columns.
  UnitaryPolyMatrix times(const CMatrix& c) const;

 private:
  int m_;
  int order_;
  std::vector<FourierSeries> stored_;
};

struct GramReport {
  CMatrix mean;           ///< averaged Gram matrix of the solution basis
  double deviation = 0;   ///< sample standard deviation of B over the grid
  double max_entry = 0;   ///< max |B| over the grid
  Complex raw_det;        ///< constant det before the phase fix
};

/// Orthonormalizes a null-space basis with the constant Gram matrix and fixes
/// det = 1 through the last column. Throws GramNotConstant when the pairing
/// varies over the circle by more than kGramTolerance * max|B|.
UnitaryPolyMatrix orthonormalize_constant_gram(const NullspaceBasis& solutions, const LastRowData& data,
                                               GramReport* report = nullptr);

/// Unitary factor Q of the polar decomposition a = Q H.
CMatrix polar_unitary(const CMatrix& a);

/// Right-multiplies U by Q* where f0 = Q H, making f0 Q* Hermitian positive
/// definite. Throws PinSingular when f0 is numerically singular.
UnitaryPolyMatrix pin_positive_definite(const UnitaryPolyMatrix& u, const CMatrix& f0);

/// F U as an exact Laurent product.
MatrixSeries apply_completion(const LastRowData& data, const UnitaryPolyMatrix& u);

struct CompletionReport {
  Eigen::VectorXd singular_values;
  double rank_gap = 1.0;
  GramReport gram;
  double negative_energy = 0;  ///< of F U, relative to ||F||
};

/// assemble -> null space -> orthonormalize -> pin.
UnitaryPolyMatrix complete(const LastRowData& data, CompletionReport* report = nullptr);

}  // namespace specfact
