#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version (used by the
// library) and a serial reference kept for testing and benchmarking.
// Reductions sum fixed-size chunks and then combine the chunk partials in
// index order, so results do not depend on the thread count.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace kbs::kernels {

using Complex = std::complex<double>;

inline constexpr std::size_t reduction_chunk = 512;

/// exp(i t w). The rounding error of t * w is recovered with an fma and
/// folded back in to first order; at |t w| ~ 1e6 it would otherwise cost
/// ~1e-10 in the phase.
inline Complex unit_phase(double t, double w) {
  const double p = t * w;
  const double e = std::fma(t, w, -p);
  const double c = std::cos(p), s = std::sin(p);
  return {c - e * s, s + e * c};
}

/// coeffs[j] *= symbol[j]
void multiply(std::span<Complex> coeffs, std::span<const Complex> symbol);
/// out[j] = exp(i t omega[j]) in[j]   (omega real, stored as complex)
void propagate(std::span<const Complex> in, std::span<const Complex> omega,
               double t, std::span<Complex> out);
/// out[k] = (sum_m b[m] u[k]^{m+1}) ux[k]   (Horner in u)
void polynomial_flux(std::span<const double> u, std::span<const double> ux,
                     std::span<const double> b, std::span<double> out);
/// sum_k w[k] f[k]^2
double weighted_square_sum(std::span<const double> f,
                           std::span<const double> w);
/// sum_k |c[k]|^2 m[k]
double weighted_power_sum(std::span<const Complex> c,
                          std::span<const double> m);
/// max_k |f[k]|
double max_abs(std::span<const double> f);

namespace serial {
void multiply(std::span<Complex> coeffs, std::span<const Complex> symbol);
void propagate(std::span<const Complex> in, std::span<const Complex> omega,
               double t, std::span<Complex> out);
void polynomial_flux(std::span<const double> u, std::span<const double> ux,
                     std::span<const double> b, std::span<double> out);
double weighted_square_sum(std::span<const double> f,
                           std::span<const double> w);
double weighted_power_sum(std::span<const Complex> c,
                          std::span<const double> m);
double max_abs(std::span<const double> f);
}  // namespace serial

}  // namespace kbs::kernels
