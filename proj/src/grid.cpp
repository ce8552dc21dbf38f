#include "kbs/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kbs/errors.hpp"

namespace kbs {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t checked_size(double length, std::size_t n) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidArgument("grid length must be positive and finite");
  if (n < 8 || !is_power_of_two(n))
    throw InvalidArgument("grid size must be a power of two >= 8, got " +
                          std::to_string(n));
  return n;
}

}  // namespace

Grid::Grid(double length, std::size_t n)
    : length_(length), n_(checked_size(length, n)), fft_(n_) {
  nodes_.resize(n_);
  wavenumbers_.resize(n_);
  const double dx = spacing();
  const double dk = wavenumber_step();
  for (std::size_t j = 0; j < n_; ++j) {
    nodes_[j] = -0.5 * length_ + static_cast<double>(j) * dx;
    wavenumbers_[j] = dk * static_cast<double>(mode(j));
  }
}

double Grid::wavenumber_step() const {
  return 2.0 * std::numbers::pi / length_;
}

long Grid::mode(std::size_t j) const {
  const long jj = static_cast<long>(j);
  const long nn = static_cast<long>(n_);
  return j < n_ / 2 ? jj : jj - nn;
}

std::size_t Grid::slot(long m) const {
  const long nn = static_cast<long>(n_);
  if (m < -nn / 2 || m >= nn / 2)
    throw InvalidArgument("mode number outside the lattice");
  return static_cast<std::size_t>(m >= 0 ? m : m + nn);
}

double Grid::max_abs_wavenumber() const {
  return wavenumber_step() * static_cast<double>(n_ / 2);
}

GridPtr make_grid(double length, std::size_t n) {
  return std::make_shared<const Grid>(length, n);
}

}  // namespace kbs
