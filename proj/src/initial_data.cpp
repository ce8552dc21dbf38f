#include "kbs/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kbs/errors.hpp"
#include "kbs/multipliers.hpp"
#include "kbs/random.hpp"
#include "kbs/weights.hpp"

namespace kbs {
namespace {

std::vector<double> gaussian_samples(const Grid& grid, const GaussianSpec& g) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double y = (grid.nodes()[k] - g.center) / g.width;
    out[k] = g.amplitude * std::exp(-y * y);
  }
  return out;
}

}  // namespace

std::vector<double> soliton_profile(const Grid& grid, double speed, double b,
                                    double center) {
  const double kappa = 0.5 * std::sqrt(speed);
  const double amp = 12.0 * kappa * kappa / b;
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double sech = 1.0 / std::cosh(kappa * (grid.nodes()[k] - center));
    out[k] = amp * sech * sech;
  }
  return out;
}

double soliton_residual(const GridPtr& grid, double speed, double b, double center) {
  const auto u = transform(soliton_profile(*grid, speed, b, center), grid);
  const auto ux = derivative(u, 1);
  const auto uxxx = derivative(u, 3);
  const std::size_t m = 2 * grid->size();
  const auto us = padded_samples(u, m);
  const auto uxs = padded_samples(ux, m);
  std::vector<double> prod(m);
  for (std::size_t k = 0; k < m; ++k) prod[k] = b * us[k] * uxs[k];
  SpectralField res = from_padded_samples(prod, grid);
  res += uxxx;
  res -= speed * ux;
  return l2_norm(res) / l2_norm(u);
}

SpectralField random_hs_field(const RandomHsSpec& spec, const GridPtr& grid,
                              std::uint64_t seed) {
  const Grid& g = *grid;
  const std::uint64_t s = spec.seed.value_or(seed);
  const double scale = spec.amplitude * std::sqrt(2.0 * std::numbers::pi / g.length());
  const double power = -spec.s - 0.5 - spec.delta;
  SpectralField f(grid);
  // Phases hang off the mode index, so refining n keeps the low modes.
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j == g.nyquist_slot()) continue;
    const long mode = g.mode(j);
    if (mode < 0) continue;
    const double xi = g.wavenumbers()[j];
    const double theta = 2.0 * std::numbers::pi * uniform01(s, static_cast<std::uint64_t>(mode));
    const double a = scale * std::pow(1.0 + xi * xi, 0.5 * power);
    if (mode == 0) {
      f[j] = a * std::cos(theta);
    } else {
      f[j] = std::polar(a, theta);
      f[g.slot(-mode)] = std::conj(f[j]);
    }
  }
  if (spec.envelope_width > 0.0) {
    auto u = inverse_transform(f);
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double y = (g.nodes()[k] - spec.center) / spec.envelope_width;
      u[k] *= std::exp(-y * y);
    }
    f = transform(u, grid);
    f[g.nyquist_slot()] = 0.0;
    symmetrize(f);
  }
  return f;
}

SpectralField generate_initial_data(const InitialDataSpec& spec, const GridPtr& grid,
                                    const ModelParams& model, std::uint64_t seed) {
  if (const auto* sol = std::get_if<SolitonSpec>(&spec)) {
    const bool kdv = model.N == 1 && model.gamma == 0.0 && model.M() == 1 &&
                     model.dispersion_mode == DispersionMode::hilbert;
    if (!kdv)
      throw ConfigError("soliton data needs the KdV model (N=1, gamma=0, M=1)");
    const double b = model.b[0];
    if (sol->b && *sol->b != b)
      throw ConfigError("soliton b does not match the model's b_1");
    if (grid->size() >= 1024) {
      const double res = soliton_residual(grid, sol->speed, b, sol->center);
      if (!(res < 1e-6)) {
        std::ostringstream os;
        os << "soliton is not resolved on this grid: relative PDE residual " << res;
        throw ConfigError(os.str());
      }
    }
    SpectralField f = transform(soliton_profile(*grid, sol->speed, b, sol->center), grid);
    f[grid->nyquist_slot()] = 0.0;
    return f;
  }
  if (const auto* gs = std::get_if<GaussianSpec>(&spec)) {
    SpectralField f = transform(gaussian_samples(*grid, *gs), grid);
    f[grid->nyquist_slot()] = 0.0;
    return f;
  }
  if (const auto* hs = std::get_if<RandomHsSpec>(&spec)) return random_hs_field(*hs, grid, seed);

  const auto& sp = std::get<SplitSpec>(spec);
  auto rough = inverse_transform(random_hs_field(sp.rough, grid, seed));
  const WeightFn cut = smooth_step(sp.x0 - 0.5 * sp.gap, 0.5 * sp.gap);
  const auto smooth = gaussian_samples(*grid, sp.smooth_right);
  for (std::size_t k = 0; k < rough.size(); ++k) {
    const double x = grid->nodes()[k];
    rough[k] = rough[k] * (1.0 - cut(x)) + smooth[k];
  }
  SpectralField f = transform(rough, grid);
  f[grid->nyquist_slot()] = 0.0;
  symmetrize(f);
  return f;
}

}  // namespace kbs
