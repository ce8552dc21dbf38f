#pragma once

#include <complex>
#include <span>
#include <vector>

#include "kbs/grid.hpp"

namespace kbs {

using Complex = std::complex<double>;

/// A real-valued periodic function stored as plane-wave amplitudes:
/// u(x) = sum_j coeffs[j] exp(i xi_j x), with coeffs in FFT order.
///
/// Single writer; operations in this library return new fields.
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex operator[](std::size_t j) const { return coeffs_[j]; }
  Complex& operator[](std::size_t j) { return coeffs_[j]; }

  /// Coefficient of the xi = 0 mode (the mean value).
  Complex mean_mode() const { return coeffs_[0]; }
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);

 private:
  GridPtr grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double factor, SpectralField a);

/// Physical samples at the grid nodes -> plane-wave amplitudes.
SpectralField transform(std::span<const double> samples, const GridPtr& grid);
/// Plane-wave amplitudes -> physical samples (real part).
std::vector<double> inverse_transform(const SpectralField& field);

/// Samples on an m-point grid of the same box (m even, m >= n). Modes the
/// native lattice lacks are zero, so this is band-limited interpolation.
std::vector<double> padded_samples(const SpectralField& field, std::size_t m);
/// Inverse of padded_samples: samples from an m-point grid truncated to the
/// native lattice of grid (Nyquist slot zeroed).
SpectralField from_padded_samples(std::span<const double> samples,
                                  const GridPtr& grid);

/// Spectral L2 norm over the periodic domain: sqrt(L sum |c_j|^2).
double l2_norm(const SpectralField& field);
/// l2_norm(a - b)
double l2_distance(const SpectralField& a, const SpectralField& b);

/// max_j |c(-xi) - conj(c(xi))| / max_j |c_j| (0 for the zero field). The
/// Nyquist slot is skipped since it pairs with itself only through its
/// imaginary part, which is included.
double hermitian_defect(const SpectralField& field);

/// Projects onto real-valued functions: c(xi), c(-xi) <- symmetric average.
void symmetrize(SpectralField& field);

}  // namespace kbs
