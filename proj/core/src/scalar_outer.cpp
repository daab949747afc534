#include "specfact/scalar_outer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "specfact/errors.hpp"

namespace specfact {

OuterFactor outer_factor(std::span<const double> modulus, int band_hi) {
  const int k = static_cast<int>(modulus.size());
  const UnitCircleGrid grid(k);
  if (band_hi < 0) band_hi = k / 2 - 1;
  if (band_hi + 1 > k) throw Error(ErrorKind::BandOverflow, "outer factor band exceeds the grid");

  double peak = 0.0;
  for (double m : modulus) {
    if (!std::isfinite(m)) throw Error(ErrorKind::DegenerateDensity, "modulus has non-finite samples");
    if (m < 0.0) throw Error(ErrorKind::InvalidArgument, "modulus has negative samples");
    peak = std::max(peak, m);
  }
  if (peak <= 0.0) {
    throw Error(ErrorKind::DegenerateDensity, "modulus vanishes identically; log is not integrable");
  }

  const double floor = kZeroFloor * peak;
  std::vector<Complex> logs(modulus.size());
  std::transform(modulus.begin(), modulus.end(), logs.begin(),
                 [floor](double m) { return Complex(std::log(std::max(m, floor)), 0.0); });

  // Analytic completion of the real log: keep l_0 and the Nyquist term once,
  // double the strictly positive frequencies. Its real part on the grid is
  // exactly log(modulus).
  const int half = k / 2;
  const auto l = grid_to_coeffs(logs, -(half - 1), half);
  std::vector<Complex> completion(static_cast<std::size_t>(half + 1));
  completion[0] = l[0].real();
  for (int n = 1; n < half; ++n) completion[static_cast<std::size_t>(n)] = 2.0 * l[n];
  completion[static_cast<std::size_t>(half)] = l[half].real();

  auto values = coeffs_to_grid(FourierSeries(0, std::move(completion)), k);
  for (auto& v : values) v = std::exp(v);

  OuterFactor out{grid_to_coeffs(values, 0, band_hi), {}};
  // Imaginary part of c_0 is pure roundoff; the factor is pinned positive at 0.
  out.coeffs.at(0) = out.coeffs[0].real();
  out.value_at_zero = out.coeffs[0];
  return out;
}

double outer_defect(const FourierSeries& f, int grid_size) {
  if (!f.analytic()) throw Error(ErrorKind::InvalidArgument, "outer_defect needs an analytic series");
  if (grid_size <= 0) {
    const auto want = static_cast<unsigned>(std::max(512, 4 * (f.hi() + 1)));
    grid_size = static_cast<int>(std::bit_ceil(want));
  }
  const auto boundary = coeffs_to_grid(f, grid_size);
  return outer_defect(f[0], boundary);
}

double outer_defect(Complex value_at_zero, std::span<const Complex> boundary) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (std::abs(value_at_zero) == 0.0) return inf;
  double mean = 0.0;
  for (const auto& v : boundary) {
    const double a = std::abs(v);
    if (a == 0.0) return inf;
    mean += std::log(a);
  }
  mean /= static_cast<double>(boundary.size());
  return std::abs(std::log(std::abs(value_at_zero)) - mean);
}

}  // namespace specfact
