#pragma once

#include <cstdint>

#include "kbs/config.hpp"
#include "kbs/field.hpp"

namespace kbs {

/// (12 kappa^2 / b) sech^2(kappa (x - center)), kappa = sqrt(speed / 4):
/// the traveling wave of u_t + u_xxx + b u u_x = 0 moving right at `speed`.
std::vector<double> soliton_profile(const Grid& grid, double speed, double b,
                                    double center);

/// L2 norm of -c u' + u''' + b u u' for the soliton sampled on grid,
/// relative to ||u||. Products are formed on a padded grid.
double soliton_residual(const GridPtr& grid, double speed, double b, double center);

SpectralField random_hs_field(const RandomHsSpec& spec, const GridPtr& grid,
                              std::uint64_t seed);

/// Builds the field described by spec. Soliton data requires the KdV model
/// (N = 1, gamma = 0, M = 1, Hilbert mode) and, at n >= 1024, a PDE residual
/// below 1e-6 ||u||. Errors are ConfigError.
SpectralField generate_initial_data(const InitialDataSpec& spec, const GridPtr& grid,
                                    const ModelParams& model, std::uint64_t seed);

}  // namespace kbs
