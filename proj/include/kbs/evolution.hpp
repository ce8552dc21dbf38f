#pragma once

#include <vector>

#include "kbs/field.hpp"
#include "kbs/model.hpp"
#include "kbs/multipliers.hpp"

namespace kbs {

/// How the physical-space product in the nonlinearity is dealiased.
struct Dealias {
  enum class Kind { two_thirds, pad };
  Kind kind = Kind::two_thirds;
  double factor = 1.0;  ///< padding factor, pad mode only (>= 1)

  static Dealias two_thirds() { return {}; }
  static Dealias pad(double factor);
  /// Padding that removes aliasing from a degree-(M+1) product.
  static Dealias exact_for(int M) { return pad(0.5 * (M + 2)); }
};

struct EvolveConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Dealias dealias;
  int output_every = 1;
  /// Allowed fraction of L2 mass in the outer 10% of the domain.
  double boundary_mass_threshold = 1e-8;
  /// Allowed growth factor of ||u(t)||_{H^N} / ||u_0||_{H^N}.
  double growth_cap = 1e8;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> snapshots;
  ModelParams params;

  bool empty() const { return snapshots.empty(); }
  const SpectralField& final() const { return snapshots.back(); }
  const Grid& grid() const { return snapshots.front().grid(); }
};

/// sum_k b_k u^k u_x, product formed in physical space.
SpectralField nonlinearity(const SpectralField& field, const ModelParams& params,
                           const Dealias& dealias);

/// Integrating-factor RK4 for u_t = i omega u - nonlinearity(u). The linear
/// part is integrated exactly through the propagator, so only the nonlinear
/// term limits the step.
class IfRk4Stepper {
 public:
  IfRk4Stepper(const ModelParams& params, const GridPtr& grid, double dt,
               Dealias dealias);

  double dt() const { return dt_; }
  SpectralField step(const SpectralField& field) const;

 private:
  ModelParams params_;
  double dt_;
  Dealias dealias_;
  MultiplierSymbol full_;  ///< exp(i omega dt)
  MultiplierSymbol half_;  ///< exp(i omega dt / 2)
};

/// One IFRK4 step. Throws InstabilityError if the result is not finite.
SpectralField step_ifrk4(const SpectralField& field, double dt,
                         const ModelParams& params, const Dealias& dealias);

/// dt = safety / (max|u|^M max|xi| max|b_k| M + guard)
double suggest_dt(const SpectralField& field, const ModelParams& params,
                  double safety);
inline constexpr double suggest_dt_guard = 1e-12;

/// Fraction of the L2 mass located within 5% of the domain length of
/// either end of the periodic box (the outer 10% of the domain).
double boundary_mass_fraction(const SpectralField& field);

Trajectory evolve(const SpectralField& u0, const EvolveConfig& config,
                  const ModelParams& params);

struct PicardResult {
  Trajectory trajectory;  ///< converged iterate on the quadrature nodes
  int iterations = 0;
  double last_increment = 0.0;
};

/// Fixed-point iteration of the Duhamel formula
///   u(t) = S(t) u0 - int_0^t S(t - tau) nonlinearity(u(tau)) dtau
/// with composite trapezoid quadrature on quad_nodes equispaced nodes.
/// Stops once the sup-in-time L2 distance of successive iterates is below
/// tol; throws ConvergenceError after max_iter iterations.
PicardResult picard_solve(const SpectralField& u0, double t_end,
                          const ModelParams& params, double tol, int max_iter,
                          int quad_nodes,
                          const Dealias& dealias = Dealias::two_thirds());

}  // namespace kbs
