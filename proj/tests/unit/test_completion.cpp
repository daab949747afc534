#include <gtest/gtest.h>

#include <random>

#include "../instances.hpp"
#include "../oracles.hpp"
#include "specfact/completion.hpp"
#include "specfact/errors.hpp"

namespace specfact {
namespace {

using instances::direct_negative_energy;
using instances::unitary_defects;

LastRowData single_tail(Complex c, int order) {
  const std::vector<FourierSeries> phi{FourierSeries::monomial(-1, c)};
  return LastRowData::from_row(phi, FourierSeries::constant(1.0), order);
}

TEST(TruncateTail, SelectsBand) {
  const auto t = truncate_tail(FourierSeries(-2, {3.0, 1.0, 5.0, 1.0}), 2);
  EXPECT_EQ(t.tail, FourierSeries(-2, {3.0, 1.0}));
  EXPECT_EQ(t.dropped_energy, 0.0);
}

TEST(TruncateTail, AnalyticInputHasZeroTail) {
  const auto t = truncate_tail(FourierSeries(0, {1.0, 2.0}), 3);
  EXPECT_EQ(t.tail.norm(), 0.0);
  EXPECT_EQ(t.dropped_energy, 0.0);
}

TEST(TruncateTail, ReportsDroppedEnergy) {
  const auto t = truncate_tail(FourierSeries::monomial(-3), 2);
  EXPECT_EQ(t.tail.norm(), 0.0);
  EXPECT_DOUBLE_EQ(t.dropped_energy, 1.0);
}

TEST(AssembleSystem, SingleTailOrderOne) {
  const auto sys = assemble_system(single_tail(0.7, 1));
  EXPECT_EQ(sys.matrix.rows(), 2);
  EXPECT_EQ(sys.matrix.cols(), 4);
  EXPECT_EQ(oracle::lu_rank(sys.matrix), 2);
}

TEST(AssembleSystem, ZeroTailsAreSolvedByUnitVectors) {
  for (int m = 2; m <= 4; ++m) {
    for (int order = 1; order <= 3; ++order) {
      std::vector<FourierSeries> phi(static_cast<std::size_t>(m - 1), FourierSeries::zero(-order, -1));
      const auto sys = assemble_system(LastRowData::from_row(phi, FourierSeries::constant(1.0), order));
      for (int k = 0; k < m; ++k) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(sys.matrix.cols());
        e(k * (order + 1)) = 1.0;
        EXPECT_EQ((sys.matrix * e).norm(), 0.0);
      }
      EXPECT_EQ(sys.matrix.cols() - oracle::lu_rank(sys.matrix), m);
    }
  }
}

TEST(AssembleSystem, OrderZeroIsEmpty) {
  const auto sys = assemble_system(single_tail(0.3, 0));
  EXPECT_EQ(sys.matrix.rows(), 0);
  EXPECT_EQ(sys.matrix.cols(), 2);
}

TEST(SolveNullspace, EmptySystemGivesStandardBasis) {
  const auto null = solve_nullspace(assemble_system(single_tail(0.3, 0)));
  EXPECT_LE((null.basis - CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(SolveNullspace, WorkedSystemAnnihilatesFU) {
  const auto data = single_tail(0.3, 1);
  const auto sys = assemble_system(data);
  const auto null = solve_nullspace(sys);
  EXPECT_EQ(null.basis.cols(), 2);
  EXPECT_LE((sys.matrix * null.basis).norm(), 1e-14);
  const auto u = orthonormalize_constant_gram(null, data);
  EXPECT_LE(direct_negative_energy(data.tails, data.f_plus, u), 1e-14);
}

TEST(SolveNullspace, RandomTailHasExactlyMSolutions) {
  std::mt19937_64 rng(3);
  const auto data = instances::random_last_row(rng, 3, 4);
  const auto sys = assemble_system(data);
  const auto null = solve_nullspace(sys);
  EXPECT_EQ(null.basis.cols(), 3);
  EXPECT_EQ(sys.matrix.cols() - oracle::lu_rank(sys.matrix), 3);
  EXPECT_GT(null.rank_gap, 1e-6);
}

TEST(OrthonormalizeConstantGram, StandardBasisGivesIdentity) {
  const auto data = single_tail(0.3, 0);
  const auto u = orthonormalize_constant_gram(solve_nullspace(assemble_system(data)), data);
  EXPECT_LE((u.realized_series().coefficient(0) - CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(OrthonormalizeConstantGram, ScalingDoesNotMatter) {
  std::mt19937_64 rng(11);
  const auto data = instances::random_last_row(rng, 3, 3);
  auto null = solve_nullspace(assemble_system(data));
  const auto u1 = orthonormalize_constant_gram(null, data);
  null.basis *= 2.0;
  const auto u2 = orthonormalize_constant_gram(null, data);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) EXPECT_LE((u1.stored(j, k) - u2.stored(j, k)).norm(), 1e-12);
  }
}

TEST(OrthonormalizeConstantGram, WorkedSystemIsUnitary) {
  const auto data = single_tail(0.3, 1);
  GramReport gram;
  const auto u = orthonormalize_constant_gram(solve_nullspace(assemble_system(data)), data, &gram);
  const auto d = unitary_defects(u);
  EXPECT_LE(d.unitarity, 1e-10);
  EXPECT_LE(d.det, 1e-10);
  EXPECT_LE(gram.deviation, 1e-12 * gram.max_entry);
}

TEST(PinPositiveDefinite, AlreadyPositive) {
  std::mt19937_64 rng(1);
  const auto pinned = pin_positive_definite(UnitaryPolyMatrix::identity(2), oracle::random_hpd(rng, 2));
  EXPECT_LE((pinned.realized_series().coefficient(0) - CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(PinPositiveDefinite, NegatedPositive) {
  std::mt19937_64 rng(2);
  const CMatrix h = oracle::random_hpd(rng, 2);
  const auto pinned = pin_positive_definite(UnitaryPolyMatrix::identity(2), -h);
  const CMatrix w = pinned.realized_series().coefficient(0);
  EXPECT_LE((w + CMatrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_NEAR(std::abs(w.determinant() - 1.0), 0.0, 1e-12);
}

TEST(PinPositiveDefinite, Rotation) {
  std::mt19937_64 rng(3);
  const double t = 0.8;
  CMatrix rot(2, 2);
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  const CMatrix f0 = rot * oracle::random_hpd(rng, 2);
  const CMatrix w = pin_positive_definite(UnitaryPolyMatrix::identity(2), f0).realized_series().coefficient(0);
  EXPECT_LE((w - rot.transpose()).norm(), 1e-12);
  EXPECT_LE((w - oracle::polar_unitary(f0).adjoint()).norm(), 1e-12);
  const CMatrix pinned = f0 * w;
  EXPECT_LE((pinned - pinned.adjoint()).norm(), 1e-12);
}

TEST(PinPositiveDefinite, SingularValueAtOrigin) {
  EXPECT_THROW(pin_positive_definite(UnitaryPolyMatrix::identity(2), CMatrix::Zero(2, 2)), Error);
}

TEST(PolarUnitary, MatchesOracle) {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 4; ++n) {
    const CMatrix a = oracle::random_matrix(rng, n, n);
    EXPECT_LE((polar_unitary(a) - oracle::polar_unitary(a)).norm(), 1e-10);
  }
}

TEST(Complete, ZeroTailsGiveIdentity) {
  std::vector<FourierSeries> phi(2, FourierSeries::zero(-3, -1));
  const auto u = complete(LastRowData::from_row(phi, FourierSeries::constant(2.0), 3));
  const auto series = u.realized_series();
  for (int n = series.lo(); n <= series.hi(); ++n) {
    const CMatrix expected = n == 0 ? CMatrix(CMatrix::Identity(3, 3)) : CMatrix(CMatrix::Zero(3, 3));
    EXPECT_LE((series.coefficient(n) - expected).norm(), 1e-12);
  }
}

TEST(Complete, SingleTail) {
  const auto data = single_tail(0.3, 1);
  CompletionReport report;
  const auto u = complete(data, &report);
  EXPECT_LE(report.negative_energy, 1e-10);
  EXPECT_LE(direct_negative_energy(data.tails, data.f_plus, u) / data.matrix().norm(), 1e-10);
  const CMatrix f0 = apply_completion(data, u).coefficient(0);
  EXPECT_LE((f0 - f0.adjoint()).norm(), 1e-12);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<CMatrix>(f0).eigenvalues().minCoeff(), 0.0);
}

TEST(CompletionProperties, RandomInstances) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_int_distribution<int> ord(1, 8);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = dim(rng);
    const int order = ord(rng);
    const auto data = instances::random_last_row(rng, m, order, trial % 2 == 0 ? 0.1 : 1.0);
    const auto null = solve_nullspace(assemble_system(data));
    EXPECT_LE(instances::gram_deviation(null.basis, m, order), 1e-9);

    const auto u = complete(data);
    const auto d = unitary_defects(u);
    EXPECT_LE(d.unitarity, 1e-9);
    EXPECT_LE(d.det, 1e-9);
    EXPECT_LE(direct_negative_energy(data.tails, data.f_plus, u) / data.matrix().norm(), 1e-10);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        EXPECT_GE(u.stored(j, k).lo(), 0);
        EXPECT_LE(u.stored(j, k).hi(), order);
      }
    }
  }
}

TEST(CompletionProperties, RefinementImprovesOnAverage) {
  // Tails decaying like 0.7^|n| are not band-limited; the residual against the
  // full row should fall as N grows.
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  const std::vector<int> orders{2, 4, 8, 16};
  std::vector<double> mean(orders.size(), 0.0);
  constexpr int kTrials = 20;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<FourierSeries> phi;
    for (int j = 0; j < 2; ++j) {
      std::vector<Complex> c;
      for (int n = -40; n <= -1; ++n) c.push_back(std::pow(0.7, -n) * Complex(g(rng), g(rng)));
      phi.emplace_back(-40, std::move(c));
    }
    const auto f_plus = instances::random_outer_polynomial(rng, 3);
    double scale = f_plus.norm() * f_plus.norm() + 2.0;
    for (const auto& p : phi) scale += p.norm() * p.norm();
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const auto u = complete(LastRowData::from_row(phi, f_plus, orders[i]));
      mean[i] += direct_negative_energy(phi, f_plus, u) / std::sqrt(scale) / kTrials;
    }
  }
  for (std::size_t i = 1; i < orders.size(); ++i) EXPECT_LE(mean[i], mean[i - 1]) << "N = " << orders[i];
}

}  // namespace
}  // namespace specfact
