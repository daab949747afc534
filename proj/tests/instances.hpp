#pragma once

// Random completion instances and direct-evaluation checks shared by the unit
// and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "specfact/completion.hpp"

namespace instances {

using specfact::Complex;
using specfact::FourierSeries;

inline std::vector<Complex> to_vector(const FourierSeries& s) { return {s.coeffs().begin(), s.coeffs().end()}; }

/// f+ = 1 + 0.4 q / sum|q_n| with q of degree <= degree, q(0) real: no zeros
/// in the closed disk, f+(0) > 0.
inline FourierSeries random_outer_polynomial(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> g;
  std::vector<Complex> q;
  for (int n = 0; n <= degree; ++n) q.emplace_back(g(rng), n == 0 ? 0.0 : g(rng));
  double l1 = 0.0;
  for (const auto& c : q) l1 += std::abs(c);
  for (auto& c : q) c *= 0.4 / l1;
  q[0] += 1.0;
  return FourierSeries(0, std::move(q));
}

/// Tail supported on [-length, -1] with l2 norm `norm`.
inline FourierSeries random_tail(std::mt19937_64& rng, int length, double norm) {
  std::normal_distribution<double> g;
  std::vector<Complex> c;
  for (int n = -length; n <= -1; ++n) c.emplace_back(g(rng), g(rng));
  FourierSeries s(-length, std::move(c));
  return (norm / s.norm()) * s;
}

inline specfact::LastRowData random_last_row(std::mt19937_64& rng, int m, int order, double tail_norm = 0.5) {
  std::vector<FourierSeries> phi;
  for (int j = 0; j + 1 < m; ++j) phi.push_back(random_tail(rng, std::max(order, 1), tail_norm));
  return specfact::LastRowData::from_row(phi, random_outer_polynomial(rng, order), order);
}

/// Realized U(z) by direct polynomial evaluation of the stored entries.
inline oracle::CMatrix evaluate_realized(const specfact::UnitaryPolyMatrix& u, Complex z) {
  const int m = u.dim();
  oracle::CMatrix out(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      const Complex v = oracle::evaluate(to_vector(u.stored(j, k)), u.stored(j, k).lo(), z);
      out(j, k) = j == m - 1 ? std::conj(v) : v;
    }
  }
  return out;
}

struct UnitaryDefects {
  double unitarity = 0;  ///< max_k ||U U* - I||_F
  double det = 0;        ///< max_k |det U - 1|
};

inline UnitaryDefects unitary_defects(const specfact::UnitaryPolyMatrix& u, int grid_size = 64) {
  UnitaryDefects d;
  const int m = u.dim();
  for (int k = 0; k < grid_size; ++k) {
    const auto x = evaluate_realized(u, oracle::root_of_unity(k, grid_size));
    d.unitarity = std::max(d.unitarity, (x * x.adjoint() - oracle::CMatrix::Identity(m, m)).norm());
    d.det = std::max(d.det, std::abs(x.determinant() - 1.0));
  }
  return d;
}

/// l2 norm of the negative coefficients of F U, by direct convolution of the
/// realized entries. F is given by its last row (identity above).
inline double direct_negative_energy(const std::vector<FourierSeries>& phi, const FourierSeries& f_plus,
                                     const specfact::UnitaryPolyMatrix& u) {
  const int m = u.dim();
  const int order = u.order();
  // realized(j, k) coefficient at index n in [-order, order]
  auto realized = [&](int j, int k, int n) -> Complex {
    const auto& s = u.stored(j, k);
    if (j == m - 1) return std::conj(s[-n]);
    return s[n];
  };
  double energy = 0.0;
  for (int k = 0; k < m; ++k) {
    // last row of F U
    int lo = -order;
    for (const auto& p : phi) lo = std::min(lo, p.lo() - order);
    for (int n = lo; n < 0; ++n) {
      Complex acc{};
      for (int j = 0; j + 1 < m; ++j) {
        const auto& p = phi[static_cast<std::size_t>(j)];
        for (int q = p.lo(); q <= p.hi(); ++q) acc += p[q] * realized(j, k, n - q);
      }
      for (int q = f_plus.lo(); q <= f_plus.hi(); ++q) acc += f_plus[q] * realized(m - 1, k, n - q);
      energy += std::norm(acc);
    }
    // rows j < m-1 of F U are rows of U
    for (int j = 0; j + 1 < m; ++j) {
      for (int n = -order; n < 0; ++n) energy += std::norm(realized(j, k, n));
    }
  }
  return std::sqrt(energy);
}

/// Relative standard deviation over the circle of the pairwise Gram matrix of
/// null-space columns, evaluated directly from the unknown vectors.
inline double gram_deviation(const oracle::CMatrix& basis, int m, int order, int grid_size = 64) {
  std::vector<oracle::CMatrix> grams;
  oracle::CMatrix mean = oracle::CMatrix::Zero(m, m);
  double max_entry = 0.0;
  for (int k = 0; k < grid_size; ++k) {
    const Complex z = oracle::root_of_unity(k, grid_size);
    oracle::CMatrix x(m, m);
    for (int c = 0; c < m; ++c) {
      for (int j = 0; j < m; ++j) {
        Complex v{};
        for (int p = 0; p <= order; ++p) {
          const Complex coeff = basis(j * (order + 1) + p, c);
          // last block holds the coefficients of the realized entry in z^{-p}
          v += coeff * std::pow(z, j == m - 1 ? -p : p);
        }
        x(j, c) = v;
      }
    }
    grams.push_back(x.adjoint() * x);
    mean += grams.back();
    max_entry = std::max(max_entry, grams.back().cwiseAbs().maxCoeff());
  }
  mean /= static_cast<double>(grid_size);
  double var = 0.0;
  for (const auto& g : grams) var += (g - mean).squaredNorm();
  return std::sqrt(var / grid_size) / max_entry;
}

}  // namespace instances
