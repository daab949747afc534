#pragma once

// Scalar spectral factorization: the outer function with a prescribed
// nonnegative boundary modulus, positive at the origin.

#include <limits>
#include <span>

#include "specfact/fourier.hpp"

namespace specfact {

/// Samples below this fraction of the largest sample are floored before log.
inline constexpr double kZeroFloor = 1e-13;

/// Analytic series f+ with f+(0) real and positive.
struct OuterFactor {
  FourierSeries coeffs;
  Complex value_at_zero;
};

/// Outer function whose boundary modulus matches `modulus` on the grid
/// z_k = exp(2 pi i k / K), K = modulus.size(). The result keeps degrees
/// 0..band_hi; band_hi < 0 selects K/2 - 1.
///
/// The Herglotz integral is evaluated as the analytic completion
/// l_0 + 2 sum_{n>=1} l_n z^n of log(modulus), exponentiated on the grid.
/// Pass |f|, not |f|^2.
///
/// Throws DegenerateDensity for an all-zero (or non-finite) modulus.
OuterFactor outer_factor(std::span<const double> modulus, int band_hi = -1);

/// |log|f(0)| - mean_k log|f(z_k)||, which vanishes iff f is outer (Jensen).
/// Returns +infinity when f(0) = 0. grid_size <= 0 picks a grid of at least
/// 512 points and four times the degree.
double outer_defect(const FourierSeries& f, int grid_size = 0);

/// Same quantity from a value at the origin and boundary samples.
double outer_defect(Complex value_at_zero, std::span<const Complex> boundary);

}  // namespace specfact
