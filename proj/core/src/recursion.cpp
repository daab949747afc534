#include "specfact/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "specfact/errors.hpp"
#include "specfact/scalar_outer.hpp"
#include "specfact/verification.hpp"

namespace specfact {

namespace {

// Squared-energy fraction of the last-row tails allowed below -N0.
constexpr double kTailEnergyCutoff = 1e-12;

std::vector<FourierSeries> last_row_phi(const MatrixSeries& matrix, int m) {
  std::vector<FourierSeries> phi;
  for (int j = 0; j + 1 < m; ++j) phi.push_back(matrix.entry(m - 1, j));
  return phi;
}

// Smallest N such that the tail energy below -N is within the cutoff.
int measured_tail_length(const MatrixSeries& matrix, int m) {
  const auto phi = last_row_phi(matrix, m);
  double total = 0.0;
  for (const auto& p : phi) total += p.norm() * p.norm();
  total += std::pow(matrix.entry(m - 1, m - 1).norm(), 2);
  int length = 0;
  double below = 0.0;
  for (int n = matrix.lo(); n < 0; ++n) {
    for (const auto& p : phi) below += std::norm(p[n]);
    if (below > kTailEnergyCutoff * total) {
      length = -n;
      break;
    }
  }
  return length;
}

struct StageAttempt {
  StageState next;
  StageReport report;
};

StageAttempt attempt_stage(const StageState& state) {
  const int m = state.m;
  const int r = state.matrix.dim();
  const int order = state.order;
  const auto& matrix = state.matrix;

  const auto phi = last_row_phi(matrix, m);
  const auto f_plus = matrix.entry(m - 1, m - 1).analytic_part();
  const auto data = LastRowData::from_row(phi, f_plus, order);

  CompletionReport completion;
  const auto u = complete(data, &completion);

  // Products on the grid, then back to the full band.
  const int k = state.grid_size;
  const auto [lo, hi] = full_band(k);
  const auto v = coeffs_to_grid(embed_block(u, r), k);
  const auto product = pointwise_product(coeffs_to_grid(matrix, k), v);

  StageAttempt out;
  out.next.m = m + 1;
  out.next.order = order;
  out.next.grid_size = k;
  out.next.matrix = grid_to_coeffs(product, lo, hi);
  out.next.diagnostics = state.diagnostics;

  const auto before = matrix.leading_block(m);
  const auto after = out.next.matrix.leading_block(m);
  double dropped = 0.0;
  for (const auto& p : phi) dropped += std::pow(truncate_tail(p, order).dropped_energy, 2);

  auto& rep = out.report;
  rep.m = m;
  rep.order = order;
  rep.attempts = 1;
  rep.residual = negative_energy(after) / before.norm();
  rep.dropped_tail = std::sqrt(dropped) / before.norm();
  rep.rank_gap = completion.rank_gap;
  rep.gram_deviation = completion.gram.max_entry > 0 ? completion.gram.deviation / completion.gram.max_entry : 0.0;
  return out;
}

}  // namespace

MatrixSeries embed_block(const UnitaryPolyMatrix& u, int r) {
  const int m = u.dim();
  if (m > r) throw Error(ErrorKind::InvalidArgument, "block larger than target dimension");
  const auto block = u.realized_series();
  MatrixSeries out(r, block.lo(), block.hi());
  for (int n = block.lo(); n <= block.hi(); ++n) {
    auto& c = out.coefficient_ref(n);
    c.topLeftCorner(m, m) = block.coefficient(n);
    if (n == 0) {
      for (int j = m; j < r; ++j) c(j, j) = 1.0;
    }
  }
  return out;
}

StageState run_stage(const StageState& state, double tau_analytic) {
  if (state.m < 2 || state.m > state.matrix.dim()) throw Error(ErrorKind::InvalidArgument, "stage index out of range");
  auto attempt = attempt_stage(state);
  if (attempt.report.residual > tau_analytic) {
    throw Error(ErrorKind::StageResidual, "stage " + std::to_string(state.m) + " left negative energy " +
                                              std::to_string(attempt.report.residual));
  }
  attempt.next.diagnostics.push_back(attempt.report);
  return std::move(attempt.next);
}

MatrixSeries canonical_normalize(const MatrixSeries& chi) {
  const CMatrix at_zero = chi.value_at_zero();
  Eigen::JacobiSVD<CMatrix> svd(at_zero);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0 || s(s.size() - 1) <= kRankTolerance * s(0)) {
    throw Error(ErrorKind::CannotNormalize, "factor is singular at the origin");
  }
  return chi.times(polar_unitary(at_zero).adjoint());
}

FactorizationResult factorize(const GridMatrixFunction& s, const FactorizationConfig& config) {
  const int r = s.dim();
  const int k = s.grid_size();
  const int n_max = std::max(1, config.n_max > 0 ? config.n_max : k / 4);

  const auto start = diagonal_outer_correction(pointwise_lower_cholesky(s));

  StageState state;
  state.grid_size = k;
  state.matrix = start.series;
  for (int m = 2; m <= r; ++m) {
    state.m = m;
    int order = config.n0 > 0 ? config.n0 : std::max(4, measured_tail_length(state.matrix, m));
    order = std::min(order, n_max);
    int attempts = 0;
    for (;;) {
      state.order = order;
      auto attempt = attempt_stage(state);
      ++attempts;
      if (attempt.report.residual <= config.tau_analytic) {
        attempt.report.attempts = attempts;
        attempt.next.diagnostics.push_back(attempt.report);
        state = std::move(attempt.next);
        break;
      }
      if (order >= n_max) {
        std::ostringstream msg;
        msg << "stage " << m << " did not reach analyticity tolerance " << config.tau_analytic
            << " by N = " << order << " (residual " << attempt.report.residual << ", dropped tail "
            << attempt.report.dropped_tail << ")";
        throw Error(ErrorKind::RefinementExhausted, msg.str());
      }
      order = std::min(2 * order, n_max);
    }
  }

  FactorizationResult result;
  result.grid_size = k;
  result.stages = state.diagnostics;
  for (const auto& d : start.diag_outer) result.diag_outer.push_back(d.coeffs);
  result.neg_energy = negative_energy(state.matrix) / state.matrix.norm();
  result.unnormalized = state.matrix.analytic_part();
  result.chi_plus = canonical_normalize(result.unnormalized);
  result.value_at_zero = result.chi_plus.value_at_zero();
  result.residual = residual(s, result.chi_plus);
  result.outer_defect = determinant_outer_defect(result.chi_plus, k);
  return result;
}

}  // namespace specfact
