#include "kbs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kbs::kernels {
namespace {

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operand size mismatch");
}

std::size_t chunk_count(std::size_t n) {
  return (n + reduction_chunk - 1) / reduction_chunk;
}

// Chunk partials are combined serially in index order.
template <typename Body>
double chunked_sum(std::size_t n, Body&& body) {
  const std::size_t chunks = chunk_count(n);
  std::vector<double> partial(chunks, 0.0);
  const long nc = static_cast<long>(chunks);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nc; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * reduction_chunk;
    const std::size_t hi = std::min(n, lo + reduction_chunk);
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) acc += body(k);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

inline double flux_at(double u, double ux, std::span<const double> b) {
  double p = 0.0;
  for (std::size_t m = b.size(); m-- > 0;) p = p * u + b[m];
  return p * u * ux;
}

}  // namespace

void multiply(std::span<Complex> coeffs, std::span<const Complex> symbol) {
  require_same(coeffs.size(), symbol.size());
  const long n = static_cast<long>(coeffs.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) coeffs[j] *= symbol[j];
}

void propagate(std::span<const Complex> in, std::span<const Complex> omega,
               double t, std::span<Complex> out) {
  require_same(in.size(), omega.size());
  require_same(in.size(), out.size());
  const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    out[j] = in[j] * unit_phase(t, omega[j].real());
  }
}

void polynomial_flux(std::span<const double> u, std::span<const double> ux,
                     std::span<const double> b, std::span<double> out) {
  require_same(u.size(), ux.size());
  require_same(u.size(), out.size());
  const long n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) out[k] = flux_at(u[k], ux[k], b);
}

double weighted_square_sum(std::span<const double> f,
                           std::span<const double> w) {
  require_same(f.size(), w.size());
  return chunked_sum(f.size(), [&](std::size_t k) { return w[k] * f[k] * f[k]; });
}

double weighted_power_sum(std::span<const Complex> c,
                          std::span<const double> m) {
  require_same(c.size(), m.size());
  return chunked_sum(c.size(), [&](std::size_t k) { return std::norm(c[k]) * m[k]; });
}

double max_abs(std::span<const double> f) {
  const std::size_t chunks = chunk_count(f.size());
  std::vector<double> partial(chunks, 0.0);
  const long nc = static_cast<long>(chunks);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nc; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * reduction_chunk;
    const std::size_t hi = std::min(f.size(), lo + reduction_chunk);
    double m = 0.0;
    for (std::size_t k = lo; k < hi; ++k) m = std::max(m, std::abs(f[k]));
    partial[static_cast<std::size_t>(c)] = m;
  }
  double m = 0.0;
  for (double p : partial) m = std::max(m, p);
  return m;
}

namespace serial {

void multiply(std::span<Complex> coeffs, std::span<const Complex> symbol) {
  require_same(coeffs.size(), symbol.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] *= symbol[j];
}

void propagate(std::span<const Complex> in, std::span<const Complex> omega,
               double t, std::span<Complex> out) {
  require_same(in.size(), omega.size());
  require_same(in.size(), out.size());
  for (std::size_t j = 0; j < in.size(); ++j)
    out[j] = in[j] * unit_phase(t, omega[j].real());
}

void polynomial_flux(std::span<const double> u, std::span<const double> ux,
                     std::span<const double> b, std::span<double> out) {
  require_same(u.size(), ux.size());
  require_same(u.size(), out.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    double uk = 1.0;
    double acc = 0.0;
    for (double bm : b) {
      uk *= u[k];
      acc += bm * uk;
    }
    out[k] = acc * ux[k];
  }
}

double weighted_square_sum(std::span<const double> f,
                           std::span<const double> w) {
  require_same(f.size(), w.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += w[k] * f[k] * f[k];
  return acc;
}

double weighted_power_sum(std::span<const Complex> c,
                          std::span<const double> m) {
  require_same(c.size(), m.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) acc += std::norm(c[k]) * m[k];
  return acc;
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace serial
}  // namespace kbs::kernels
