#include "specfact/completion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "specfact/errors.hpp"

namespace specfact {

namespace {

Eigen::Index unknown_index(int block, int p, int order) { return static_cast<Eigen::Index>(block) * (order + 1) + p; }

int gram_grid_size(int order) {
  return static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(8, 4 * (order + 1)))));
}

}  // namespace

TruncatedTail truncate_tail(const FourierSeries& phi, int order) {
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "truncation order must be nonnegative");
  double dropped = 0.0;
  for (int n = phi.lo(); n < std::min(-order, phi.hi() + 1); ++n) dropped += std::norm(phi[n]);
  FourierSeries tail = order == 0 ? FourierSeries::zero(-1, -1) : phi.restricted(-order, -1);
  return {std::move(tail), std::sqrt(dropped)};
}

LastRowData LastRowData::from_row(std::span<const FourierSeries> phi, const FourierSeries& f_plus, int order) {
  if (!f_plus.analytic()) throw Error(ErrorKind::InvalidArgument, "diagonal entry must be analytic");
  if (!(f_plus[0].real() > 0.0)) throw Error(ErrorKind::InvalidArgument, "diagonal entry must be positive at 0");
  LastRowData data;
  data.m = static_cast<int>(phi.size()) + 1;
  data.order = order;
  for (const auto& p : phi) data.tails.push_back(truncate_tail(p, order).tail);
  data.f_plus = f_plus.restricted(0, std::max(2 * order, 0));
  return data;
}

MatrixSeries LastRowData::matrix() const {
  std::vector<FourierSeries> entries(static_cast<std::size_t>(m * m));
  for (int j = 0; j + 1 < m; ++j) {
    entries[static_cast<std::size_t>(j * m + j)] = FourierSeries::constant(1.0);
    entries[static_cast<std::size_t>((m - 1) * m + j)] = tails[static_cast<std::size_t>(j)];
  }
  entries[static_cast<std::size_t>(m * m - 1)] = f_plus;
  return MatrixSeries::from_entries(m, entries);
}

CompletionSystem assemble_system(const LastRowData& data) {
  const int m = data.m;
  const int order = data.order;
  const auto& f = data.f_plus;
  const int last = m - 1;

  CompletionSystem sys{m, order, CMatrix::Zero(static_cast<Eigen::Index>(m) * order,
                                               static_cast<Eigen::Index>(m) * (order + 1))};
  auto& a = sys.matrix;

  // (C1): coefficient n in [-N, -1] of sum_j phi_j x_j + f+ W.
  for (int n = -order; n <= -1; ++n) {
    const Eigen::Index row = n + order;
    for (int j = 0; j < last; ++j) {
      const auto& phi = data.tails[static_cast<std::size_t>(j)];
      for (int p = 0; p <= order; ++p) a(row, unknown_index(j, p, order)) = phi[n - p];
    }
    for (int p = -n; p <= order; ++p) a(row, unknown_index(last, p, order)) = f[n + p];
  }

  // (C2_j), conjugated: coefficient n in [1, N] of conj(f+) x_j - conj(phi_j) W.
  for (int j = 0; j < last; ++j) {
    const auto& phi = data.tails[static_cast<std::size_t>(j)];
    for (int n = 1; n <= order; ++n) {
      const Eigen::Index row = static_cast<Eigen::Index>(order) * (1 + j) + (n - 1);
      for (int p = n; p <= order; ++p) a(row, unknown_index(j, p, order)) = std::conj(f[p - n]);
      for (int p = 0; p <= order; ++p) a(row, unknown_index(last, p, order)) = -std::conj(phi[-n - p]);
    }
  }
  return sys;
}

NullspaceBasis solve_nullspace(const CompletionSystem& system) {
  const int m = system.m;
  const auto cols = system.matrix.cols();
  NullspaceBasis out{m, system.order, CMatrix(), Eigen::VectorXd(), 1.0};

  if (system.matrix.rows() == 0) {
    out.basis = CMatrix::Identity(cols, cols).rightCols(m);
    return out;
  }

  Eigen::BDCSVD<CMatrix> svd(system.matrix, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values(0);
  const double smin = out.singular_values(out.singular_values.size() - 1);
  out.rank_gap = smax > 0.0 ? smin / smax : 0.0;
  if (out.singular_values.size() + m != cols || out.rank_gap <= kRankTolerance) {
    throw Error(ErrorKind::CompletionRankDeficiency,
                "completion system has a null space wider than " + std::to_string(m) +
                    " (rank gap " + std::to_string(out.rank_gap) + ")");
  }
  out.basis = svd.matrixV().rightCols(m);
  return out;
}

// ---------------------------------------------------------------------------
// UnitaryPolyMatrix

UnitaryPolyMatrix::UnitaryPolyMatrix(int m, int order, std::vector<FourierSeries> stored)
    : m_(m), order_(order), stored_(std::move(stored)) {
  if (stored_.size() != static_cast<std::size_t>(m * m)) {
    throw Error(ErrorKind::InvalidArgument, "unitary completion needs m*m entries");
  }
  for (auto& s : stored_) {
    if (s.lo() < 0 || s.hi() > order) throw Error(ErrorKind::InvalidArgument, "entry exceeds degree bound");
    s = s.restricted(0, order);
  }
}

UnitaryPolyMatrix UnitaryPolyMatrix::identity(int m) {
  std::vector<FourierSeries> entries(static_cast<std::size_t>(m * m));
  for (int j = 0; j < m; ++j) entries[static_cast<std::size_t>(j * m + j)] = FourierSeries::constant(1.0);
  return UnitaryPolyMatrix(m, 0, std::move(entries));
}

FourierSeries UnitaryPolyMatrix::realized(int j, int k) const {
  return j == m_ - 1 ? conjugate_series(stored(j, k)) : stored(j, k);
}

MatrixSeries UnitaryPolyMatrix::realized_series() const {
  std::vector<FourierSeries> entries;
  entries.reserve(stored_.size());
  for (int j = 0; j < m_; ++j) {
    for (int k = 0; k < m_; ++k) entries.push_back(realized(j, k));
  }
  return MatrixSeries::from_entries(m_, entries).restricted(-order_, order_);
}

GridMatrixFunction UnitaryPolyMatrix::boundary(int grid_size) const {
  return coeffs_to_grid(realized_series(), grid_size);
}

UnitaryPolyMatrix UnitaryPolyMatrix::times(const CMatrix& c) const {
  std::vector<FourierSeries> out(stored_.size(), FourierSeries::zero(0, order_));
  for (int j = 0; j < m_; ++j) {
    const bool conj_row = j == m_ - 1;
    for (int k = 0; k < m_; ++k) {
      auto& dst = out[static_cast<std::size_t>(j * m_ + k)];
      for (int a = 0; a < m_; ++a) {
        const Complex w = conj_row ? std::conj(c(a, k)) : c(a, k);
        dst += w * stored(j, a);
      }
    }
  }
  return UnitaryPolyMatrix(m_, order_, std::move(out));
}

// ---------------------------------------------------------------------------
// Orthonormalization and pinning

UnitaryPolyMatrix orthonormalize_constant_gram(const NullspaceBasis& solutions, const LastRowData& data,
                                               GramReport* report) {
  const int m = data.m;
  const int order = data.order;
  const int last = m - 1;
  const CMatrix& v = solutions.basis;

  // Realized columns of the raw basis, as stored entries.
  auto stored_from = [&](const CMatrix& basis) {
    std::vector<FourierSeries> entries(static_cast<std::size_t>(m * m), FourierSeries::zero(0, order));
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j < m; ++j) {
        auto& e = entries[static_cast<std::size_t>(j * m + k)];
        for (int p = 0; p <= order; ++p) {
          const Complex c = basis(unknown_index(j, p, order), k);
          e.at(p) = j == last ? std::conj(c) : c;
        }
      }
    }
    return UnitaryPolyMatrix(m, order, std::move(entries));
  };

  const auto raw = stored_from(v);
  const auto samples = raw.boundary(gram_grid_size(order));

  GramReport gram;
  gram.mean = CMatrix::Zero(m, m);
  std::vector<CMatrix> grams;
  grams.reserve(samples.samples().size());
  for (const auto& x : samples.samples()) {
    grams.push_back(x.adjoint() * x);
    gram.mean += grams.back();
    gram.max_entry = std::max(gram.max_entry, grams.back().cwiseAbs().maxCoeff());
  }
  const auto count = static_cast<double>(grams.size());
  gram.mean /= count;
  double var = 0.0;
  for (const auto& g : grams) var += (g - gram.mean).squaredNorm();
  gram.deviation = std::sqrt(var / count);

  if (gram.deviation > kGramTolerance * gram.max_entry) {
    throw Error(ErrorKind::GramNotConstant,
                "solution pairing varies over the circle (deviation " + std::to_string(gram.deviation) + ")");
  }

  const CMatrix hermitian = 0.5 * (gram.mean + gram.mean.adjoint());
  Eigen::LLT<CMatrix> llt(hermitian);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::CompletionRankDeficiency, "Gram matrix of the completion is singular");
  }
  const CMatrix lower = llt.matrixL();
  const CMatrix transform = lower.adjoint().triangularView<Eigen::Upper>().solve(CMatrix::Identity(m, m));
  CMatrix basis = v * transform;

  // det U is a unimodular constant; fold its conjugate into the last column.
  const auto unitary_samples = stored_from(basis).boundary(gram_grid_size(order));
  Complex det{};
  for (const auto& x : unitary_samples.samples()) det += x.determinant();
  det /= static_cast<double>(unitary_samples.grid_size());
  gram.raw_det = det;
  if (std::abs(det) < 0.5) {
    throw Error(ErrorKind::CompletionRankDeficiency, "orthonormalized completion has degenerate determinant");
  }
  basis.col(last) *= std::conj(det / std::abs(det));

  if (report != nullptr) *report = gram;
  return stored_from(basis);
}

CMatrix polar_unitary(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

UnitaryPolyMatrix pin_positive_definite(const UnitaryPolyMatrix& u, const CMatrix& f0) {
  Eigen::JacobiSVD<CMatrix> svd(f0);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0 || s(s.size() - 1) <= kRankTolerance * s(0)) {
    throw Error(ErrorKind::PinSingular, "value at the origin is singular; cannot pin");
  }
  return u.times(polar_unitary(f0).adjoint());
}

MatrixSeries apply_completion(const LastRowData& data, const UnitaryPolyMatrix& u) {
  return laurent_multiply(data.matrix(), u.realized_series());
}

UnitaryPolyMatrix complete(const LastRowData& data, CompletionReport* report) {
  const auto system = assemble_system(data);
  const auto null = solve_nullspace(system);
  GramReport gram;
  auto u = orthonormalize_constant_gram(null, data, &gram);
  const auto f0 = apply_completion(data, u).coefficient(0);
  u = pin_positive_definite(u, f0);
  if (report != nullptr) {
    report->singular_values = null.singular_values;
    report->rank_gap = null.rank_gap;
    report->gram = gram;
    const auto f = data.matrix();
    report->negative_energy = negative_energy(apply_completion(data, u)) / f.norm();
  }
  return u;
}

}  // namespace specfact
