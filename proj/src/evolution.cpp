#include "kbs/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kbs/errors.hpp"
#include "kbs/kernels.hpp"

namespace kbs {
namespace {

std::size_t padded_size(std::size_t n, double factor) {
  auto m = static_cast<std::size_t>(std::ceil(factor * static_cast<double>(n)));
  if (m < n) m = n;
  return m + (m % 2);
}

double growth_norm(const SpectralField& f, int N) {
  double acc = 0.0;
  const auto& xi = f.grid().wavenumbers();
  for (std::size_t j = 0; j < f.size(); ++j)
    acc += std::norm(f[j]) * std::pow(1.0 + xi[j] * xi[j], N);
  return std::sqrt(acc);
}

}  // namespace

Dealias Dealias::pad(double factor) {
  if (!(factor >= 1.0)) throw InvalidArgument("padding factor must be >= 1");
  return {Kind::pad, factor};
}

void EvolveConfig::validate() const {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw InvalidArgument("dt and t_end must be positive");
  if (dt > t_end) throw InvalidArgument("dt must not exceed t_end");
  if (output_every < 1) throw InvalidArgument("output_every must be >= 1");
  if (dealias.kind == Dealias::Kind::pad && !(dealias.factor >= 1.0))
    throw InvalidArgument("padding factor must be >= 1");
  if (!(boundary_mass_threshold > 0.0))
    throw InvalidArgument("boundary_mass_threshold must be positive");
  if (!(growth_cap > 1.0)) throw InvalidArgument("growth_cap must exceed 1");
}

SpectralField nonlinearity(const SpectralField& field, const ModelParams& params,
                           const Dealias& dealias) {
  SpectralField out(field.grid_ptr());
  if (params.b.empty()) return out;
  const Grid& grid = field.grid();
  const std::size_t n = grid.size();
  const auto& xi = grid.wavenumbers();

  std::vector<Complex> u_hat(field.coeffs().begin(), field.coeffs().end());
  std::size_t m = n;
  long cutoff = static_cast<long>(n) / 2;  // modes with |mode| >= cutoff dropped
  if (dealias.kind == Dealias::Kind::two_thirds) {
    cutoff = static_cast<long>(n) / 3;
  } else {
    m = padded_size(n, dealias.factor);
  }
  auto keep = [&](std::size_t j) { return std::abs(grid.mode(j)) < cutoff; };

  std::vector<Complex> ux_hat(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!keep(j) || j == grid.nyquist_slot()) u_hat[j] = 0.0;
    ux_hat[j] = Complex(0.0, xi[j]) * u_hat[j];
  }

  const auto u = padded_samples(SpectralField(field.grid_ptr(), std::move(u_hat)), m);
  const auto ux = padded_samples(SpectralField(field.grid_ptr(), std::move(ux_hat)), m);
  std::vector<double> flux(m);
  kernels::polynomial_flux(u, ux, params.b, flux);
  out = from_padded_samples(flux, field.grid_ptr());
  for (std::size_t j = 0; j < n; ++j)
    if (!keep(j)) out[j] = 0.0;
  return out;
}

IfRk4Stepper::IfRk4Stepper(const ModelParams& params, const GridPtr& grid,
                           double dt, Dealias dealias)
    : params_(params), dt_(dt), dealias_(dealias) {
  params_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgument("time step must be positive and finite");
  const MultiplierSymbol omega = dispersion_symbol(params_, *grid);
  full_.values.resize(grid->size());
  half_.values.resize(grid->size());
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double w = omega.values[j].real();
    full_.values[j] = kernels::unit_phase(dt, w);
    half_.values[j] = kernels::unit_phase(0.5 * dt, w);
  }
  full_.values[grid->nyquist_slot()] = 0.0;
  half_.values[grid->nyquist_slot()] = 0.0;
}

SpectralField IfRk4Stepper::step(const SpectralField& field) const {
  const std::size_t n = field.size();
  const double h = dt_;
  const auto& E = full_.values;
  const auto& E2 = half_.values;
  if (params_.b.empty()) {
    SpectralField out = field;
    kernels::multiply(out.coeffs(), E);
    return out;
  }

  // k_i hold the right-hand side -nonlinearity(.) in the rotating frame.
  auto rhs = [&](const SpectralField& u) {
    SpectralField k = nonlinearity(u, params_, dealias_);
    k *= -1.0;
    return k;
  };
  SpectralField stage(field.grid_ptr());

  const SpectralField k1 = rhs(field);
  for (std::size_t j = 0; j < n; ++j) stage[j] = E2[j] * (field[j] + 0.5 * h * k1[j]);
  const SpectralField k2 = rhs(stage);
  for (std::size_t j = 0; j < n; ++j) stage[j] = E2[j] * field[j] + 0.5 * h * k2[j];
  const SpectralField k3 = rhs(stage);
  for (std::size_t j = 0; j < n; ++j) stage[j] = E[j] * field[j] + h * E2[j] * k3[j];
  const SpectralField k4 = rhs(stage);

  SpectralField out(field.grid_ptr());
  for (std::size_t j = 0; j < n; ++j)
    out[j] = E[j] * field[j] +
             (h / 6.0) * (E[j] * k1[j] + 2.0 * E2[j] * (k2[j] + k3[j]) + k4[j]);
  return out;
}

SpectralField step_ifrk4(const SpectralField& field, double dt,
                         const ModelParams& params, const Dealias& dealias) {
  const IfRk4Stepper stepper(params, field.grid_ptr(), dt, dealias);
  SpectralField out = stepper.step(field);
  if (!out.all_finite())
    throw InstabilityError("non-finite coefficients after IFRK4 step", dt);
  return out;
}

double suggest_dt(const SpectralField& field, const ModelParams& params,
                  double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw InvalidArgument("safety factor must lie in (0, 1]");
  const int M = params.M();
  double rate = 0.0;
  if (M > 0) {
    const auto u = inverse_transform(field);
    const double umax = kernels::max_abs(u);
    double bmax = 0.0;
    for (double bk : params.b) bmax = std::max(bmax, std::abs(bk));
    rate = std::pow(umax, M) * field.grid().max_abs_wavenumber() * bmax * M;
  }
  return safety / (rate + suggest_dt_guard);
}

double boundary_mass_fraction(const SpectralField& field) {
  const Grid& grid = field.grid();
  const auto u = inverse_transform(field);
  const double edge = 0.45 * grid.length();
  std::vector<double> outer(u.size()), ones(u.size(), 1.0);
  for (std::size_t k = 0; k < u.size(); ++k)
    outer[k] = std::abs(grid.nodes()[k]) >= edge ? 1.0 : 0.0;
  const double total = kernels::weighted_square_sum(u, ones);
  if (total == 0.0) return 0.0;
  return kernels::weighted_square_sum(u, outer) / total;
}

Trajectory evolve(const SpectralField& u0, const EvolveConfig& config,
                  const ModelParams& params) {
  config.validate();
  params.validate();
  const auto steps = static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
  const double h = config.t_end / static_cast<double>(steps);
  const IfRk4Stepper stepper(params, u0.grid_ptr(), h, config.dealias);
  const double norm0 = growth_norm(u0, params.N);

  Trajectory traj;
  traj.params = params;
  auto record = [&](double t, const SpectralField& u) {
    if (norm0 > 0.0 && growth_norm(u, params.N) > config.growth_cap * norm0) {
      std::ostringstream os;
      os << "H^" << params.N << " norm grew beyond " << config.growth_cap
         << " times its initial value at t=" << t;
      throw InstabilityError(os.str(), t);
    }
    const double frac = boundary_mass_fraction(u);
    if (frac > config.boundary_mass_threshold) {
      std::ostringstream os;
      os << "boundary contamination at t=" << t << ": outer-layer mass fraction "
         << frac << " exceeds " << config.boundary_mass_threshold;
      throw BoundaryContaminationError(os.str(), t, frac);
    }
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
  };

  if (!u0.all_finite()) throw InstabilityError("initial data is not finite", 0.0);
  record(0.0, u0);
  SpectralField u = u0;
  for (long step = 1; step <= steps; ++step) {
    u = stepper.step(u);
    const double t = (step == steps) ? config.t_end : h * static_cast<double>(step);
    if (!u.all_finite()) {
      std::ostringstream os;
      os << "non-finite coefficients at t=" << t << " (dt=" << h << ")";
      throw InstabilityError(os.str(), t);
    }
    if (step % config.output_every == 0 || step == steps) record(t, u);
  }
  return traj;
}

PicardResult picard_solve(const SpectralField& u0, double t_end,
                          const ModelParams& params, double tol, int max_iter,
                          int quad_nodes, const Dealias& dealias) {
  params.validate();
  if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
  if (quad_nodes < 2) throw InvalidArgument("quad_nodes must be >= 2");
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");

  const auto q = static_cast<std::size_t>(quad_nodes);
  const double h = t_end / static_cast<double>(q - 1);
  const MultiplierSymbol omega = dispersion_symbol(params, u0.grid());
  std::vector<double> times(q);
  for (std::size_t i = 0; i < q; ++i)
    times[i] = (i + 1 == q) ? t_end : h * static_cast<double>(i);

  std::vector<SpectralField> free;
  free.reserve(q);
  for (double t : times) free.push_back(linear_propagator(u0, t, omega));
  std::vector<SpectralField> iterate = free;

  PicardResult result;
  for (int it = 1; it <= max_iter; ++it) {
    // w_i = S(-tau_i) N(u(tau_i)); u_new(tau_i) = S(tau_i)(u0 - int_0^tau_i w).
    std::vector<SpectralField> next;
    next.reserve(q);
    SpectralField accumulated(u0.grid_ptr());
    SpectralField w_prev =
        linear_propagator(nonlinearity(iterate[0], params, dealias), -times[0], omega);
    next.push_back(free[0]);
    for (std::size_t i = 1; i < q; ++i) {
      SpectralField w =
          linear_propagator(nonlinearity(iterate[i], params, dealias), -times[i], omega);
      const double hi = times[i] - times[i - 1];
      for (std::size_t j = 0; j < w.size(); ++j)
        accumulated[j] += 0.5 * hi * (w_prev[j] + w[j]);
      next.push_back(free[i] - linear_propagator(accumulated, times[i], omega));
      w_prev = std::move(w);
    }

    double increment = 0.0;
    for (std::size_t i = 0; i < q; ++i)
      increment = std::max(increment, l2_distance(next[i], iterate[i]));
    iterate = std::move(next);
    result.iterations = it;
    result.last_increment = increment;
    if (!std::isfinite(increment))
      throw ConvergenceError("Picard iterates became non-finite", it, increment);
    if (increment < tol) {
      result.trajectory.times = std::move(times);
      result.trajectory.snapshots = std::move(iterate);
      result.trajectory.params = params;
      return result;
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not reach tol=" << tol << " in " << max_iter
     << " iterations (last increment " << result.last_increment << ")";
  throw ConvergenceError(os.str(), result.iterations, result.last_increment);
}

}  // namespace kbs
