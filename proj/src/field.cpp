#include "kbs/field.hpp"

#include <algorithm>
#include <cmath>

#include "kbs/errors.hpp"
#include "kbs/kernels.hpp"

namespace kbs {

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)), coeffs_(grid_->size(), Complex{}) {}

SpectralField::SpectralField(GridPtr grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_->size())
    throw InvalidArgument("coefficient count does not match grid size");
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (other.size() != size())
    throw InvalidArgument("field grids differ");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += other[j];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (other.size() != size())
    throw InvalidArgument("field grids differ");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= other[j];
  return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}
SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}
SpectralField operator*(double factor, SpectralField a) {
  a *= factor;
  return a;
}

// Nodes start at -L/2, so exp(i xi_j x_k) = (-1)^j exp(2 pi i j k / n) and the
// plane-wave amplitude is (-1)^j / n times the DFT coefficient.
SpectralField transform(std::span<const double> samples, const GridPtr& grid) {
  const std::size_t n = grid->size();
  if (samples.size() != n)
    throw InvalidArgument("sample count does not match grid size");
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> out(n);
  grid->fft().forward(in, out);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] *= (grid->mode(j) % 2 == 0 ? inv_n : -inv_n);
  return SpectralField(grid, std::move(out));
}

std::vector<double> inverse_transform(const SpectralField& field) {
  const Grid& grid = field.grid();
  const std::size_t n = grid.size();
  std::vector<Complex> in(n), out(n);
  for (std::size_t j = 0; j < n; ++j)
    in[j] = grid.mode(j) % 2 == 0 ? field[j] : -field[j];
  grid.fft().backward(in, out);
  std::vector<double> samples(n);
  for (std::size_t k = 0; k < n; ++k) samples[k] = out[k].real();
  return samples;
}

std::vector<double> padded_samples(const SpectralField& field, std::size_t m) {
  const Grid& grid = field.grid();
  const std::size_t n = grid.size();
  if (m == n) return inverse_transform(field);
  if (m < n || m % 2 != 0)
    throw InvalidArgument("padded size must be even and at least n");
  std::vector<Complex> in(m, Complex{}), out(m);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == grid.nyquist_slot()) continue;
    const long mode = grid.mode(j);
    const auto slot = static_cast<std::size_t>(mode >= 0 ? mode : mode + static_cast<long>(m));
    in[slot] = mode % 2 == 0 ? field[j] : -field[j];
  }
  Fft(m).backward(in, out);
  std::vector<double> samples(m);
  for (std::size_t k = 0; k < m; ++k) samples[k] = out[k].real();
  return samples;
}

SpectralField from_padded_samples(std::span<const double> samples,
                                  const GridPtr& grid) {
  const std::size_t m = samples.size();
  const std::size_t n = grid->size();
  if (m == n) {
    SpectralField f = transform(samples, grid);
    f[grid->nyquist_slot()] = 0.0;
    return f;
  }
  if (m < n || m % 2 != 0)
    throw InvalidArgument("padded size must be even and at least n");
  std::vector<Complex> in(samples.begin(), samples.end()), out(m);
  Fft(m).forward(in, out);
  const double inv_m = 1.0 / static_cast<double>(m);
  SpectralField f(grid);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == grid->nyquist_slot()) continue;
    const long mode = grid->mode(j);
    const auto slot = static_cast<std::size_t>(mode >= 0 ? mode : mode + static_cast<long>(m));
    f[j] = (mode % 2 == 0 ? inv_m : -inv_m) * out[slot];
  }
  return f;
}

double l2_norm(const SpectralField& field) {
  std::vector<double> ones(field.size(), 1.0);
  return std::sqrt(field.grid().length() *
                   kernels::weighted_power_sum(field.coeffs(), ones));
}

double l2_distance(const SpectralField& a, const SpectralField& b) {
  return l2_norm(a - b);
}

double hermitian_defect(const SpectralField& field) {
  const Grid& grid = field.grid();
  const std::size_t n = grid.size();
  double scale = 0.0;
  for (const auto& c : field.coeffs()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double worst = std::abs(field[0].imag());
  for (std::size_t j = 1; j < n / 2; ++j) {
    const Complex a = field[j];
    const Complex b = field[n - j];
    worst = std::max(worst, std::abs(b - std::conj(a)));
  }
  worst = std::max(worst, std::abs(field[n / 2].imag()));
  return worst / scale;
}

void symmetrize(SpectralField& field) {
  const std::size_t n = field.size();
  field[0] = field[0].real();
  field[n / 2] = field[n / 2].real();
  for (std::size_t j = 1; j < n / 2; ++j) {
    const Complex avg = 0.5 * (field[j] + std::conj(field[n - j]));
    field[j] = avg;
    field[n - j] = std::conj(avg);
  }
}

}  // namespace kbs
