#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "kbs/fft.hpp"

namespace kbs {

/// Periodic computational domain [-L/2, L/2) with n uniform nodes.
///
/// Wavenumbers are stored in FFT order: index j in [0, n/2) carries
/// xi = 2 pi j / L and index j in [n/2, n) carries xi = 2 pi (j - n) / L, so
/// the Nyquist slot j = n/2 holds xi = -pi n / L.
class Grid {
 public:
  Grid(double length, std::size_t n);

  double length() const { return length_; }
  std::size_t size() const { return n_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  /// 2 pi / L
  double wavenumber_step() const;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }

  /// Signed integer mode number of FFT slot j.
  long mode(std::size_t j) const;
  /// FFT slot of signed mode number m (|m| < n/2, or m = -n/2).
  std::size_t slot(long m) const;
  std::size_t nyquist_slot() const { return n_ / 2; }
  double max_abs_wavenumber() const;

  const Fft& fft() const { return fft_; }

 private:
  double length_;
  std::size_t n_;
  std::vector<double> nodes_;
  std::vector<double> wavenumbers_;
  Fft fft_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validated constructor: length > 0, n a power of two with n >= 8.
GridPtr make_grid(double length, std::size_t n);

}  // namespace kbs
