#pragma once
// Helpers shared by the unit tests. The oracles here deliberately avoid the
// library's FFT path: O(n^2) sums and plain loops only.
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "kbs/field.hpp"
#include "kbs/grid.hpp"
#include "kbs/random.hpp"

namespace testing {

using kbs::Complex;
inline constexpr double pi = std::numbers::pi;

// Band-limited random real field; modes with |m| >= n/3 are left empty so
// products and shifts never touch the Nyquist slot.
inline kbs::SpectralField random_field(const kbs::GridPtr& g, std::uint64_t seed,
                                       bool mean_zero = false) {
  kbs::SpectralField f(g);
  kbs::Stream rng(seed);
  const long n = static_cast<long>(g->size());
  for (long m = 0; m < n / 3; ++m) {
    if (m == 0 && mean_zero) continue;
    const double scale = 1.0 / (1.0 + 0.1 * m);
    Complex c(rng.uniform(-1, 1) * scale, m == 0 ? 0.0 : rng.uniform(-1, 1) * scale);
    f[g->slot(m)] = c;
    if (m > 0) f[g->slot(-m)] = std::conj(c);
  }
  return f;
}

// u(x) = sum_j c_j exp(i xi_j x) evaluated by brute force.
inline double evaluate(const kbs::SpectralField& f, double x) {
  const auto& xi = f.grid().wavenumbers();
  Complex acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += f[j] * std::exp(Complex(0.0, xi[j] * x));
  return acc.real();
}

inline std::vector<Complex> naive_dft(const std::vector<double>& u, const kbs::Grid& g) {
  const auto& xi = g.wavenumbers();
  const auto& x = g.nodes();
  std::vector<Complex> c(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) acc += u[k] * std::exp(Complex(0.0, -xi[j] * x[k]));
    c[j] = acc / static_cast<double>(u.size());
  }
  return c;
}

inline std::vector<double> sample(const kbs::Grid& g, auto&& fn) {
  std::vector<double> out;
  out.reserve(g.size());
  for (double x : g.nodes()) out.push_back(fn(x));
  return out;
}

inline double max_coeff_diff(const kbs::SpectralField& a, const kbs::SpectralField& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

inline double max_coeff(const kbs::SpectralField& a) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j]));
  return d;
}

// Plain left-endpoint sum of f^2 over the periodic nodes (exact for
// trigonometric polynomials of low enough degree).
inline double node_sum(const std::vector<double>& f, const kbs::Grid& g) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * g.spacing();
}

}  // namespace testing
