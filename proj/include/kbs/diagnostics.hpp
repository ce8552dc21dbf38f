#pragma once

#include <map>
#include <string>
#include <vector>

#include "kbs/evolution.hpp"
#include "kbs/field.hpp"
#include "kbs/model.hpp"
#include "kbs/multipliers.hpp"

namespace kbs {

/// int u^2 over the box (Parseval).
double mass(const SpectralField& field);
/// Hamiltonian of the model: 1/2 ||d^N u||^2 - gamma/2 || |D|^{1/2} u ||^2
/// - 1/2 sum (-1)^k a_k ||d^k u||^2 - sum b_k/((k+1)(k+2)) int u^{k+2}.
/// In fractional mode the gamma term uses |D|^{beta/2}.
double energy(const SpectralField& field, const ModelParams& params);
/// int u over the box.
double integral_I(const SpectralField& field);
/// ||J^s u||_{L^2}
double sobolev_norm(const SpectralField& field, double s);

/// Trapezoid quadrature of grid samples restricted to [a, b] by a sharp
/// indicator; partial cells at the endpoints are integrated from the linear
/// interpolant. Requires -L/2 <= a <= b <= L/2.
double interval_integral(std::span<const double> samples, const Grid& grid,
                         double a, double b);

/// int_0^T int_{-R}^{R} (A^r u)^2 dx dt, trapezoid in time over snapshots.
double kato_functional(const Trajectory& traj, double r, double R, AKind kind);
/// sup_t int_{x0 + eps - v t}^{L/2} (J^r u)^2 dx
double propagation_functional(const Trajectory& traj, double r, double x0,
                              double eps, double v);
/// Left-half-line counterpart: sup_t int_{-L/2}^{x0 - eps - v t} (J^r u)^2 dx
double mirror_propagation_functional(const Trajectory& traj, double r,
                                     double x0, double eps, double v);
/// int_0^T int_{x0 + eps - v t}^{x0 + R - v t} (J^{m+N} u)^2 dx dt
double window_smoothing_functional(const Trajectory& traj, double m, double x0,
                                   double eps, double R, double v);
/// int <x_->^{-(floor(r - s) + 1 + delta)} (J^r u)^2 dx with x_- = max(0, x0 - x).
/// t only has to be positive; callers multiply by it.
double decay_weighted_functional(const SpectralField& field, double r, double s,
                                 double delta, double t, double x0 = 0.0);

enum class FunctionalKind {
  mass,
  energy,
  integral_I,
  sobolev_norm,
  kato,
  propagation,
  mirror_propagation,
  window_smoothing,
  decay_weighted,
};
const char* to_string(FunctionalKind kind);
FunctionalKind parse_functional_kind(const std::string& name);

/// One requested functional. Only the parameters the kind reads are used.
struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::mass;
  double s = 0.0;      ///< sobolev_norm order, decay_weighted base regularity
  double r = 0.0;      ///< kato / propagation / decay order (m for window)
  double R = 1.0;      ///< kato half-width, window length
  AKind akind = AKind::J;
  double x0 = 0.0;
  double eps = 0.5;
  double v = 1.0;
  double delta = 0.5;

  /// Column label, e.g. "kato[r=2.6;R=5;kind=J]".
  std::string label() const;
  /// True when the column holds a running time integral or running sup.
  bool cumulative() const;
};

struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<std::string> columns;
  /// records[i][c]: value of column c at times[i].
  std::vector<std::vector<double>> records;
  ModelParams params;
  double length = 0.0;
  std::size_t n = 0;
  std::vector<FunctionalSpec> specs;

  double final_value(std::size_t column) const { return records.back()[column]; }
};

/// Evaluates every spec at every snapshot. Time-integrated functionals are
/// reported as their running integral from 0 to t, sup functionals as the
/// running sup, so the last row holds the trajectory value.
DiagnosticSeries collect(const Trajectory& traj,
                         const std::vector<FunctionalSpec>& specs);

}  // namespace kbs
