#include "specfact/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "specfact/errors.hpp"

namespace specfact {

namespace {

int wrap_index(int n, int k) noexcept {
  const int r = n % k;
  return r < 0 ? r + k : r;
}

// Unnormalized length-K DFT with FFTW sign convention (-1 forward, +1 backward).
// Plans are made with FFTW_ESTIMATE, which never touches the buffers.
std::vector<Complex> dft(std::span<const Complex> in, int sign) {
  const int n = static_cast<int>(in.size());
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * in.size()));
  fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
  for (int k = 0; k < n; ++k) {
    buf[k][0] = in[static_cast<std::size_t>(k)].real();
    buf[k][1] = in[static_cast<std::size_t>(k)].imag();
  }
  fftw_execute(plan);
  std::vector<Complex> out(in.size());
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = {buf[k][0], buf[k][1]};
  fftw_destroy_plan(plan);
  fftw_free(buf);
  return out;
}

void check_grid_size(int k) {
  if (k < 2 || !is_power_of_two(k)) {
    throw Error(ErrorKind::InvalidArgument,
                "grid size must be a power of two >= 2, got " + std::to_string(k));
  }
}

void check_band(int lo, int hi, int grid_size) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty coefficient band");
  if (hi - lo + 1 > grid_size) {
    throw Error(ErrorKind::BandOverflow, "band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                             "] does not fit a grid of " + std::to_string(grid_size) +
                                             " samples");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// UnitCircleGrid

UnitCircleGrid::UnitCircleGrid(int size) : size_(size) { check_grid_size(size); }

double UnitCircleGrid::angle(int k) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(size_);
}

Complex UnitCircleGrid::point(int k) const noexcept { return std::polar(1.0, angle(k)); }

// ---------------------------------------------------------------------------
// FourierSeries

FourierSeries::FourierSeries(int lo, std::vector<Complex> coeffs) : lo_(lo), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidArgument, "a series needs at least one coefficient");
}

FourierSeries FourierSeries::zero(int lo, int hi) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty coefficient band");
  return FourierSeries(lo, std::vector<Complex>(static_cast<std::size_t>(hi - lo + 1)));
}

Complex& FourierSeries::at(int n) {
  if (n < lo_ || n > hi()) {
    throw Error(ErrorKind::InvalidArgument, "index " + std::to_string(n) + " outside band");
  }
  return coeffs_[static_cast<std::size_t>(n - lo_)];
}

FourierSeries FourierSeries::restricted(int lo, int hi) const {
  FourierSeries out = zero(lo, hi);
  for (int n = std::max(lo, lo_); n <= std::min(hi, this->hi()); ++n) out.at(n) = (*this)[n];
  return out;
}

Complex FourierSeries::evaluate(Complex z) const {
  // Horner on the polynomial part, then shift by z^lo.
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, lo_);
}

double FourierSeries::norm() const noexcept {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& other) {
  const int lo = std::min(lo_, other.lo_);
  const int hi = std::max(this->hi(), other.hi());
  if (lo != lo_ || hi != this->hi()) *this = restricted(lo, hi);
  for (int n = other.lo_; n <= other.hi(); ++n) at(n) += other[n];
  return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& other) {
  return *this += Complex(-1.0) * other;
}

FourierSeries& FourierSeries::operator*=(Complex c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
FourierSeries operator*(Complex c, FourierSeries a) { return a *= c; }

// ---------------------------------------------------------------------------
// MatrixSeries

MatrixSeries::MatrixSeries(int dim, int lo, int hi) : dim_(dim), lo_(lo) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "matrix dimension must be positive");
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty coefficient band");
  coeffs_.assign(static_cast<std::size_t>(hi - lo + 1), CMatrix::Zero(dim, dim));
}

MatrixSeries MatrixSeries::identity(int dim) { return constant(CMatrix::Identity(dim, dim)); }

MatrixSeries MatrixSeries::constant(const CMatrix& c) {
  if (c.rows() != c.cols()) throw Error(ErrorKind::InvalidArgument, "constant must be square");
  MatrixSeries out(static_cast<int>(c.rows()), 0, 0);
  out.coeffs_[0] = c;
  return out;
}

MatrixSeries MatrixSeries::from_entries(int dim, std::span<const FourierSeries> entries) {
  if (entries.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(dim * dim) + " entries");
  }
  int lo = entries.front().lo();
  int hi = entries.front().hi();
  for (const auto& e : entries) {
    lo = std::min(lo, e.lo());
    hi = std::max(hi, e.hi());
  }
  MatrixSeries out(dim, lo, hi);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const auto& e = entries[static_cast<std::size_t>(i * dim + j)];
      for (int n = e.lo(); n <= e.hi(); ++n) out.coefficient_ref(n)(i, j) = e[n];
    }
  }
  return out;
}

CMatrix MatrixSeries::coefficient(int n) const {
  if (n < lo_ || n > hi()) return CMatrix::Zero(dim_, dim_);
  return coeffs_[static_cast<std::size_t>(n - lo_)];
}

CMatrix& MatrixSeries::coefficient_ref(int n) {
  if (n < lo_ || n > hi()) {
    throw Error(ErrorKind::InvalidArgument, "index " + std::to_string(n) + " outside band");
  }
  return coeffs_[static_cast<std::size_t>(n - lo_)];
}

FourierSeries MatrixSeries::entry(int i, int j) const {
  std::vector<Complex> c(coeffs_.size());
  for (std::size_t n = 0; n < coeffs_.size(); ++n) c[n] = coeffs_[n](i, j);
  return FourierSeries(lo_, std::move(c));
}

void MatrixSeries::set_entry(int i, int j, const FourierSeries& s) {
  const int lo = std::min(lo_, s.lo());
  const int hi = std::max(this->hi(), s.hi());
  if (lo != lo_ || hi != this->hi()) *this = restricted(lo, hi);
  for (int n = lo_; n <= this->hi(); ++n) coefficient_ref(n)(i, j) = s[n];
}

CMatrix MatrixSeries::evaluate(Complex z) const {
  CMatrix acc = CMatrix::Zero(dim_, dim_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, lo_);
}

MatrixSeries MatrixSeries::restricted(int lo, int hi) const {
  MatrixSeries out(dim_, lo, hi);
  for (int n = std::max(lo, lo_); n <= std::min(hi, this->hi()); ++n) out.coefficient_ref(n) = coefficient(n);
  return out;
}

MatrixSeries MatrixSeries::leading_block(int m) const {
  if (m < 1 || m > dim_) throw Error(ErrorKind::InvalidArgument, "block size out of range");
  MatrixSeries out(m, lo_, hi());
  for (std::size_t n = 0; n < coeffs_.size(); ++n) out.coeffs_[n] = coeffs_[n].topLeftCorner(m, m);
  return out;
}

double MatrixSeries::norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += c.squaredNorm();
  return std::sqrt(s);
}

MatrixSeries MatrixSeries::times(const CMatrix& c) const {
  if (c.rows() != dim_ || c.cols() != dim_) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  MatrixSeries out = *this;
  for (auto& m : out.coeffs_) m = m * c;
  return out;
}

// ---------------------------------------------------------------------------
// GridMatrixFunction

GridMatrixFunction::GridMatrixFunction(int dim, std::vector<CMatrix> samples)
    : dim_(dim), samples_(std::move(samples)) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "matrix dimension must be positive");
  check_grid_size(static_cast<int>(samples_.size()));
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const auto& s = samples_[k];
    if (s.rows() != dim || s.cols() != dim) {
      throw Error(ErrorKind::InvalidArgument, "sample " + std::to_string(k) + " has wrong shape");
    }
    if (!s.allFinite()) {
      throw Error(ErrorKind::InvalidArgument, "sample " + std::to_string(k) + " is not finite");
    }
  }
}

double GridMatrixFunction::max_norm() const {
  double m = 0.0;
  for (const auto& s : samples_) m = std::max(m, s.norm());
  return m;
}

std::optional<int> GridMatrixFunction::first_non_hermitian(double tol) const {
  const double scale = std::max(max_norm(), 1e-300);
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if ((samples_[k] - samples_[k].adjoint()).norm() > tol * scale) return static_cast<int>(k);
  }
  return std::nullopt;
}

std::vector<Complex> GridMatrixFunction::entry_samples(int i, int j) const {
  std::vector<Complex> out(samples_.size());
  for (std::size_t k = 0; k < samples_.size(); ++k) out[k] = samples_[k](i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Transforms

FourierSeries grid_to_coeffs(std::span<const Complex> samples, int lo, int hi) {
  const int k = static_cast<int>(samples.size());
  check_grid_size(k);
  check_band(lo, hi, k);
  const auto spectrum = dft(samples, FFTW_FORWARD);
  FourierSeries out = FourierSeries::zero(lo, hi);
  const double scale = 1.0 / static_cast<double>(k);
  for (int n = lo; n <= hi; ++n) out.at(n) = spectrum[static_cast<std::size_t>(wrap_index(n, k))] * scale;
  return out;
}

MatrixSeries grid_to_coeffs(const GridMatrixFunction& f, int lo, int hi) {
  const int r = f.dim();
  check_band(lo, hi, f.grid_size());
  MatrixSeries out(r, lo, hi);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const auto samples = f.entry_samples(i, j);
      const auto s = grid_to_coeffs(samples, lo, hi);
      for (int n = lo; n <= hi; ++n) out.coefficient_ref(n)(i, j) = s[n];
    }
  }
  return out;
}

std::vector<Complex> coeffs_to_grid(const FourierSeries& s, int grid_size) {
  check_grid_size(grid_size);
  check_band(s.lo(), s.hi(), grid_size);
  std::vector<Complex> bins(static_cast<std::size_t>(grid_size));
  for (int n = s.lo(); n <= s.hi(); ++n) bins[static_cast<std::size_t>(wrap_index(n, grid_size))] = s[n];
  return dft(bins, FFTW_BACKWARD);
}

GridMatrixFunction coeffs_to_grid(const MatrixSeries& s, int grid_size) {
  const int r = s.dim();
  std::vector<CMatrix> samples(static_cast<std::size_t>(grid_size), CMatrix::Zero(r, r));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const auto values = coeffs_to_grid(s.entry(i, j), grid_size);
      for (int k = 0; k < grid_size; ++k) samples[static_cast<std::size_t>(k)](i, j) = values[static_cast<std::size_t>(k)];
    }
  }
  return GridMatrixFunction(r, std::move(samples));
}

// ---------------------------------------------------------------------------
// Laurent arithmetic

FourierSeries laurent_multiply(const FourierSeries& a, const FourierSeries& b) {
  FourierSeries out = FourierSeries::zero(a.lo() + b.lo(), a.hi() + b.hi());
  auto dst = out.coeffs();
  const auto x = a.coeffs();
  const auto y = b.coeffs();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == Complex{}) continue;
    for (std::size_t j = 0; j < y.size(); ++j) dst[i + j] += x[i] * y[j];
  }
  return out;
}

MatrixSeries laurent_multiply(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  MatrixSeries out(a.dim(), a.lo() + b.lo(), a.hi() + b.hi());
  for (int p = a.lo(); p <= a.hi(); ++p) {
    const CMatrix& ap = a.coefficients()[static_cast<std::size_t>(p - a.lo())];
    if (ap.isZero(0.0)) continue;
    for (int q = b.lo(); q <= b.hi(); ++q) {
      out.coefficient_ref(p + q) += ap * b.coefficients()[static_cast<std::size_t>(q - b.lo())];
    }
  }
  return out;
}

FourierSeries conjugate_series(const FourierSeries& a) {
  FourierSeries out = FourierSeries::zero(-a.hi(), -a.lo());
  for (int n = a.lo(); n <= a.hi(); ++n) out.at(-n) = std::conj(a[n]);
  return out;
}

double negative_energy(const FourierSeries& a) noexcept {
  double s = 0.0;
  for (int n = a.lo(); n < std::min(0, a.hi() + 1); ++n) s += std::norm(a[n]);
  return std::sqrt(s);
}

double negative_energy(const MatrixSeries& a) {
  double s = 0.0;
  for (int n = a.lo(); n < std::min(0, a.hi() + 1); ++n) s += a.coefficient(n).squaredNorm();
  return std::sqrt(s);
}

GridMatrixFunction pointwise_product(const GridMatrixFunction& a, const GridMatrixFunction& b) {
  if (a.dim() != b.dim() || a.grid_size() != b.grid_size()) {
    throw Error(ErrorKind::InvalidArgument, "grid functions differ in shape");
  }
  std::vector<CMatrix> out(a.samples().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.samples()[k] * b.samples()[k];
  return GridMatrixFunction(a.dim(), std::move(out));
}

}  // namespace specfact
