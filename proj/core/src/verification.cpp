#include "specfact/verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "specfact/errors.hpp"
#include "specfact/scalar_outer.hpp"

namespace specfact {

double residual(const GridMatrixFunction& s, const MatrixSeries& chi) {
  if (chi.dim() != s.dim()) throw Error(ErrorKind::InvalidArgument, "density and factor differ in dimension");
  const auto values = coeffs_to_grid(chi, s.grid_size());
  double worst = 0.0;
  for (int k = 0; k < s.grid_size(); ++k) {
    const CMatrix& x = values[k];
    worst = std::max(worst, (s[k] - x * x.adjoint()).norm());
  }
  const double scale = s.max_norm();
  return scale > 0.0 ? worst / scale : worst;
}

double determinant_outer_defect(const MatrixSeries& chi, int grid_size) {
  if (!chi.analytic()) throw Error(ErrorKind::InvalidArgument, "outer defect needs an analytic factor");
  const auto values = coeffs_to_grid(chi, grid_size);
  std::vector<Complex> dets(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) dets[static_cast<std::size_t>(k)] = values[k].determinant();
  return outer_defect(chi.value_at_zero().determinant(), dets);
}

bool canonical_pin(const CMatrix& at_zero, double tol) {
  const double scale = at_zero.norm();
  if (scale == 0.0) return false;
  if ((at_zero - at_zero.adjoint()).norm() > tol * scale) return false;
  const CMatrix h = 0.5 * (at_zero + at_zero.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() > 0.0;
}

EquivalenceReport unitary_equivalence(const MatrixSeries& chi1, const MatrixSeries& chi2) {
  const int r = chi1.dim();
  if (chi2.dim() != r) throw Error(ErrorKind::InvalidArgument, "factors differ in dimension");
  const int lo = std::min(chi1.lo(), chi2.lo());
  const int hi = std::max(chi1.hi(), chi2.hi());

  // Normal equations; by Parseval the circle averages are coefficient sums.
  CMatrix gram = CMatrix::Zero(r, r);
  CMatrix cross = CMatrix::Zero(r, r);
  for (int n = lo; n <= hi; ++n) {
    const CMatrix b = chi2.coefficient(n);
    gram += b.adjoint() * b;
    cross += b.adjoint() * chi1.coefficient(n);
  }
  Eigen::JacobiSVD<CMatrix> svd(gram);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(sv.size() - 1) <= 1e-14 * sv(0)) {
    throw Error(ErrorKind::EquivalenceUndetermined, "reference factor has a singular Gram matrix");
  }

  EquivalenceReport rep;
  rep.u = gram.ldlt().solve(cross);
  rep.unitarity_defect = (rep.u * rep.u.adjoint() - CMatrix::Identity(r, r)).norm();
  double diff = 0.0;
  for (int n = lo; n <= hi; ++n) diff += (chi1.coefficient(n) - chi2.coefficient(n) * rep.u).squaredNorm();
  const double norm1 = chi1.norm();
  rep.match_defect = norm1 > 0.0 ? std::sqrt(diff) / norm1 : std::sqrt(diff);
  return rep;
}

TestDensity generate_test_density(int r, int degree, std::uint64_t seed, double margin, int grid_size) {
  if (r < 1 || degree < 0) throw Error(ErrorKind::InvalidArgument, "need r >= 1 and degree >= 0");
  if (margin < 0.0 || margin >= 1.0) throw Error(ErrorKind::InvalidArgument, "margin must lie in [0, 1)");
  if (degree + 1 > grid_size / 2) throw Error(ErrorKind::BandOverflow, "degree too large for the grid");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> gain(0.5, 2.0);
  const double c = gain(rng);

  MatrixSeries p(r, 0, degree);
  for (int n = 0; n <= degree; ++n) {
    auto& coef = p.coefficient_ref(n);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) coef(i, j) = Complex(unit(rng), unit(rng)) / std::sqrt(2.0);
    }
  }
  const CMatrix p0 = p.coefficient(0);
  p.coefficient_ref(0) = 0.5 * (p0 + p0.adjoint());

  // Sup norm on a grid four times finer than needed for the degree.
  const int fine = static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(grid_size, 16 * (degree + 1)))));
  const auto samples = coeffs_to_grid(p, fine);
  double sup = 0.0;
  for (const auto& x : samples.samples()) {
    sup = std::max(sup, Eigen::JacobiSVD<CMatrix>(x).singularValues()(0));
  }

  MatrixSeries chi(r, 0, degree);
  for (int n = 0; n <= degree; ++n) {
    CMatrix coef = sup > 0.0 ? CMatrix(margin / sup * p.coefficient(n)) : CMatrix::Zero(r, r);
    if (n == 0) coef += CMatrix::Identity(r, r);
    chi.coefficient_ref(n) = c * coef;
  }

  const auto values = coeffs_to_grid(chi, grid_size);
  std::vector<CMatrix> density(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    const CMatrix& x = values[k];
    CMatrix sk = x * x.adjoint();
    density[static_cast<std::size_t>(k)] = 0.5 * (sk + sk.adjoint());
  }
  return {GridMatrixFunction(r, std::move(density)), std::move(chi)};
}

LogDetDiagnostic log_det_diagnostic(const GridMatrixFunction& s) {
  std::vector<double> dets(static_cast<std::size_t>(s.grid_size()));
  double peak = 0.0;
  for (int k = 0; k < s.grid_size(); ++k) {
    dets[static_cast<std::size_t>(k)] = s[k].determinant().real();
    peak = std::max(peak, std::abs(dets[static_cast<std::size_t>(k)]));
  }
  LogDetDiagnostic out;
  const double floor = peak > 0.0 ? kZeroFloor * peak : kZeroFloor;
  for (double d : dets) {
    if (d < floor) out.floored = true;
    out.mean_abs_log += std::abs(std::log(std::max(d, floor)));
  }
  out.mean_abs_log /= static_cast<double>(dets.size());
  return out;
}

VerificationReport verify_factor(const GridMatrixFunction& s, const MatrixSeries& chi) {
  VerificationReport rep;
  rep.residual = residual(s, chi);
  const double norm = chi.norm();
  rep.neg_energy = norm > 0.0 ? negative_energy(chi) / norm : 0.0;
  const auto analytic = chi.analytic_part();
  rep.outer_defect = determinant_outer_defect(analytic, s.grid_size());
  rep.canonical_pin = canonical_pin(analytic.value_at_zero());
  rep.log_det = log_det_diagnostic(s);
  return rep;
}

VerificationReport full_report(const GridMatrixFunction& s, const FactorizationResult& result) {
  auto rep = verify_factor(s, result.chi_plus);
  rep.neg_energy = std::max(rep.neg_energy, result.neg_energy);
  rep.stages = result.stages;
  return rep;
}

}  // namespace specfact
