#include "specfact/triangular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specfact/errors.hpp"

namespace specfact {

namespace {

// Cholesky of a Hermitian PSD matrix. Non-positive pivots give a zero column,
// so the diagonal is always real and nonnegative.
CMatrix lower_cholesky(const CMatrix& s) {
  const auto n = s.rows();
  CMatrix l = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = s(j, j).real();
    for (Eigen::Index k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (d <= 0.0) continue;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Complex acc = s(i, j);
      for (Eigen::Index k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

}  // namespace

std::pair<int, int> full_band(int grid_size) { return {-(grid_size / 2 - 1), grid_size / 2}; }

LowerTriangularField pointwise_lower_cholesky(const GridMatrixFunction& s, double psd_tol) {
  if (auto bad = s.first_non_hermitian()) {
    throw Error(ErrorKind::NotHermitian, "density is not Hermitian at sample " + std::to_string(*bad));
  }
  const int r = s.dim();
  const int k = s.grid_size();

  std::vector<double> lambda_min(static_cast<std::size_t>(k));
  double scale = 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig;
  for (int i = 0; i < k; ++i) {
    eig.compute(s[i], Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    lambda_min[static_cast<std::size_t>(i)] = ev.minCoeff();
    scale = std::max(scale, ev.cwiseAbs().maxCoeff());
  }

  LowerTriangularField out;
  out.dim = r;
  out.samples.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double lmin = lambda_min[static_cast<std::size_t>(i)];
    if (lmin < -psd_tol * scale) {
      throw Error(ErrorKind::NotPositiveSemidefinite,
                  "density is not positive semidefinite at sample " + std::to_string(i) +
                      " (smallest eigenvalue " + std::to_string(lmin) + ")");
    }
    CMatrix si = s[i];
    if (lmin < kZeroFloor * scale) {
      const double delta = psd_tol * si.trace().real() / static_cast<double>(r);
      si.diagonal().array() += delta;
      out.regularized.push_back(i);
    }
    out.samples[static_cast<std::size_t>(i)] = lower_cholesky(si);
  }

  if (static_cast<double>(out.regularized.size()) > kMaxRegularizedFraction * static_cast<double>(k)) {
    throw Error(ErrorKind::DegenerateDensity,
                "density is singular at " + std::to_string(out.regularized.size()) + " of " +
                    std::to_string(k) + " samples; log det S is not integrable");
  }
  return out;
}

StartMatrix diagonal_outer_correction(const LowerTriangularField& a, int band_hi) {
  const int r = a.dim;
  const int k = a.grid_size();
  const auto [lo, hi] = full_band(k);
  if (band_hi < 0) band_hi = hi;

  StartMatrix out;
  std::vector<CMatrix> corrected = a.samples;
  for (int j = 0; j < r; ++j) {
    std::vector<double> modulus(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) modulus[static_cast<std::size_t>(i)] = a.samples[static_cast<std::size_t>(i)](j, j).real();
    auto outer = outer_factor(modulus, band_hi);
    const auto boundary = coeffs_to_grid(outer.coeffs, k);

    const double floor = kZeroFloor * *std::max_element(modulus.begin(), modulus.end());
    for (int i = 0; i < k; ++i) {
      const double fjj = modulus[static_cast<std::size_t>(i)];
      // Numerically zero column: any unimodular factor is admissible.
      const Complex u = fjj > floor ? boundary[static_cast<std::size_t>(i)] / fjj : Complex(1.0);
      corrected[static_cast<std::size_t>(i)].col(j) *= u;
    }
    out.diag_outer.push_back(std::move(outer));
  }

  out.series = grid_to_coeffs(GridMatrixFunction(r, std::move(corrected)), lo, hi);
  for (int j = 0; j < r; ++j) {
    out.series.set_entry(j, j, out.diag_outer[static_cast<std::size_t>(j)].coeffs.restricted(lo, hi));
    for (int i = 0; i < j; ++i) out.series.set_entry(i, j, FourierSeries::zero(lo, hi));
  }
  return out;
}

}  // namespace specfact
