#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kbs/grid.hpp"

namespace kbs {

/// Smooth scalar weight with analytic first and second derivatives.
struct WeightFn {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  /// supp(w') is contained in [support_lo, support_hi].
  double support_lo = 0.0;
  double support_hi = 0.0;
  /// supp(w) is contained in [value_lo, value_hi] (infinite when unbounded).
  double value_lo = -std::numeric_limits<double>::infinity();
  double value_hi = std::numeric_limits<double>::infinity();
  /// Set for constant weights; lets operator checks skip products entirely.
  bool constant = false;
  std::string name;

  double operator()(double x) const { return value(x); }
  double derivative(double x) const { return d1(x); }
  double second_derivative(double x) const { return d2(x); }
  std::vector<double> sample(const Grid& grid) const;
  std::vector<double> sample_d1(const Grid& grid) const;
  std::vector<double> sample_d2(const Grid& grid) const;
};

namespace mollifier {
/// Unit-mass bump proportional to exp(-1/(1-y^2)) on (-1, 1).
double rho(double y);
double rho_prime(double y);
/// Phi(y) = int_{-1}^{y} rho.  Exactly 0 below -1 and 1 above 1.
double cdf(double y);
/// G(y) = int_{-inf}^{y} Phi, so G = 0 below -1 and G = y above 1.
double ramp(double y);
/// Cells of the reference lattice the tables are built on.
inline constexpr std::size_t table_cells = std::size_t{1} << 16;
}  // namespace mollifier

WeightFn constant_weight(double c);
/// Phi((x - center) / halfwidth): 0 left of center - halfwidth, 1 right of
/// center + halfwidth.
WeightFn smooth_step(double center, double halfwidth);
/// The piecewise-linear ramp 0 -> 1 on [x0, x1] convolved with the mollifier
/// of half-width w. It equals the linear ramp wherever that is affine on a
/// w-neighbourhood.
WeightFn mollified_ramp(double x0, double x1, double w);
/// Rises on [x0 - w, x1 + w], equal to 1 on [x1 + w, x2 - w], falls on
/// [x2 - w, x3 + w]. Compactly supported, so periodic-compatible when the
/// support is inside the box.
WeightFn ramp_bump(double x0, double x1, double x2, double x3, double w);

/// Smooth nondecreasing ramp: 0 for x <= eps, 1 for x >= b,
/// chi' >= 1/(b - 3 eps) on [3 eps, b - 2 eps]. Requires b >= 5 eps.
WeightFn build_chi(double eps, double b);

struct Partition {
  WeightFn chi, phi, psi;
};
/// chi + phi + psi = 1 with psi supported in x <= eps/2 and phi in [eps/4, b].
Partition build_partition(double eps, double b);
/// chi^k + phi_tilde^k + psi = 1. phi_tilde is the k-th root of the
/// nonnegative remainder; its derivatives are reported as 0 within eps/100
/// of points where the remainder vanishes.
Partition build_power_partition(double eps, double b, int k);

struct ThetaEta {
  WeightFn theta, eta;
};
/// theta = 1 on [eps/5, b + eps/4], supp in [eps/6, b + eps/2];
/// eta   = 1 on [eps/7, b + 3 eps/4], supp in [eps/8, b + eps].
ThetaEta build_theta_eta(double eps, double b);

/// psi_l with psi_l' = 1 on |x| <= 2^{-l} A, supp psi_l' in
/// |x| <= 2^{-l+1/2} A, 0 <= psi_l' <= 1 and psi_l = 0 far to the left.
WeightFn build_psi_sequence(double A, int ell);

/// x -> w(x + shift); support bounds move by -shift.
WeightFn translate(const WeightFn& w, double shift);

}  // namespace kbs
