#pragma once

// Functions on the unit circle: grid samples, Laurent coefficient bands, and
// exact transforms between the two.
//
// Coefficient bands are always explicit. Anything that would fold
// coefficients onto each other modulo K throws ErrorKind::BandOverflow.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace specfact {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kDefaultGridSize = 512;
/// Hermitian check tolerance, relative to the largest sample norm.
inline constexpr double kHermitianTolerance = 1e-10;

constexpr bool is_power_of_two(int k) noexcept { return k > 0 && (k & (k - 1)) == 0; }

/// K equispaced points z_k = exp(2 pi i k / K) on the unit circle.
class UnitCircleGrid {
 public:
  explicit UnitCircleGrid(int size);

  int size() const noexcept { return size_; }
  double angle(int k) const noexcept;
  Complex point(int k) const noexcept;

  /// Widest band [lo, hi] that can be recovered from K samples without
  /// touching the Nyquist index: [-(K/2 - 1), K/2 - 1].
  std::pair<int, int> resolvable_band() const noexcept { return {-(size_ / 2 - 1), size_ / 2 - 1}; }

 private:
  int size_;
};

/// Laurent series sum_{n=lo}^{hi} c_n z^n with a contiguous coefficient band.
class FourierSeries {
 public:
  /// The zero series on band [0, 0].
  FourierSeries() : lo_(0), coeffs_(1) {}
  FourierSeries(int lo, std::vector<Complex> coeffs);

  static FourierSeries zero(int lo, int hi);
  static FourierSeries constant(Complex c) { return FourierSeries(0, {c}); }
  static FourierSeries monomial(int n, Complex c = 1.0) { return FourierSeries(n, {c}); }

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Coefficient at index n; zero outside the stored band.
  Complex operator[](int n) const noexcept {
    return (n < lo_ || n > hi()) ? Complex{} : coeffs_[static_cast<std::size_t>(n - lo_)];
  }
  /// Mutable coefficient; n must lie inside the band.
  Complex& at(int n);

  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }

  /// Stored band carries no negative indices.
  bool analytic() const noexcept { return lo_ >= 0; }

  /// Same function restricted (or zero-padded) to band [lo, hi].
  FourierSeries restricted(int lo, int hi) const;
  /// Non-negative part, band [0, max(hi, 0)].
  FourierSeries analytic_part() const { return restricted(0, std::max(hi(), 0)); }

  Complex evaluate(Complex z) const;
  /// l2 norm of the coefficients.
  double norm() const noexcept;

  FourierSeries& operator+=(const FourierSeries& other);
  FourierSeries& operator-=(const FourierSeries& other);
  FourierSeries& operator*=(Complex c);

  friend bool operator==(const FourierSeries&, const FourierSeries&) = default;

 private:
  int lo_;
  std::vector<Complex> coeffs_;
};

FourierSeries operator+(FourierSeries a, const FourierSeries& b);
FourierSeries operator-(FourierSeries a, const FourierSeries& b);
FourierSeries operator*(Complex c, FourierSeries a);

/// Square matrix Laurent series. Every entry shares the band [lo, hi];
/// storage is one dense r x r coefficient matrix per index.
class MatrixSeries {
 public:
  MatrixSeries() : MatrixSeries(1, 0, 0) {}
  /// Zero series.
  MatrixSeries(int dim, int lo, int hi);

  static MatrixSeries identity(int dim);
  static MatrixSeries constant(const CMatrix& c);
  /// Row-major entries; the common band is the union of the entry bands.
  static MatrixSeries from_entries(int dim, std::span<const FourierSeries> entries);

  int dim() const noexcept { return dim_; }
  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficient matrix at index n; zero outside the band.
  CMatrix coefficient(int n) const;
  CMatrix& coefficient_ref(int n);
  const std::vector<CMatrix>& coefficients() const noexcept { return coeffs_; }

  FourierSeries entry(int i, int j) const;
  /// Replaces entry (i, j), widening the common band if needed.
  void set_entry(int i, int j, const FourierSeries& s);

  bool analytic() const noexcept { return lo_ >= 0; }
  /// Index-0 coefficient; equals the value at the origin for analytic series.
  CMatrix value_at_zero() const { return coefficient(0); }
  CMatrix evaluate(Complex z) const;

  MatrixSeries restricted(int lo, int hi) const;
  MatrixSeries analytic_part() const { return restricted(0, std::max(hi(), 0)); }
  /// Upper-left m x m block.
  MatrixSeries leading_block(int m) const;

  /// Frobenius norm over all coefficients.
  double norm() const;

  /// Right multiplication by a constant matrix.
  MatrixSeries times(const CMatrix& c) const;

 private:
  int dim_;
  int lo_;
  std::vector<CMatrix> coeffs_;
};

/// K samples of an r x r matrix-function on the unit circle.
class GridMatrixFunction {
 public:
  GridMatrixFunction(int dim, std::vector<CMatrix> samples);

  int dim() const noexcept { return dim_; }
  int grid_size() const noexcept { return static_cast<int>(samples_.size()); }
  UnitCircleGrid grid() const { return UnitCircleGrid(grid_size()); }

  const CMatrix& operator[](int k) const { return samples_[static_cast<std::size_t>(k)]; }
  const std::vector<CMatrix>& samples() const noexcept { return samples_; }

  /// Largest Frobenius norm over the samples.
  double max_norm() const;
  /// First sample violating S = S* beyond tol * max_norm(), if any.
  std::optional<int> first_non_hermitian(double tol = kHermitianTolerance) const;

  /// Scalar samples of entry (i, j).
  std::vector<Complex> entry_samples(int i, int j) const;

 private:
  int dim_;
  std::vector<CMatrix> samples_;
};

/// c_n = (1/K) sum_k f(z_k) z_k^{-n} for n in [lo, hi].
FourierSeries grid_to_coeffs(std::span<const Complex> samples, int lo, int hi);
MatrixSeries grid_to_coeffs(const GridMatrixFunction& f, int lo, int hi);

/// f(z_k) = sum_n c_n z_k^n. Throws BandOverflow when the band is wider than K.
std::vector<Complex> coeffs_to_grid(const FourierSeries& s, int grid_size);
GridMatrixFunction coeffs_to_grid(const MatrixSeries& s, int grid_size);

/// Exact coefficient convolution.
FourierSeries laurent_multiply(const FourierSeries& a, const FourierSeries& b);
MatrixSeries laurent_multiply(const MatrixSeries& a, const MatrixSeries& b);

/// f -> conj(f) on |z| = 1: output c_n = conj(input c_{-n}).
FourierSeries conjugate_series(const FourierSeries& a);

/// l2 norm of the coefficients at negative indices.
double negative_energy(const FourierSeries& a) noexcept;
double negative_energy(const MatrixSeries& a);

/// Sample-wise product a(z_k) * b(z_k).
GridMatrixFunction pointwise_product(const GridMatrixFunction& a, const GridMatrixFunction& b);

}  // namespace specfact
