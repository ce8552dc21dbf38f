#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kbs/field.hpp"
#include "kbs/model.hpp"
#include "kbs/weights.hpp"

namespace kbs {

/// Measured versus claimed operator order. The pass rule of each check is
/// recorded in `rule` since the tolerances are conventions of this library.
struct OrderReport {
  std::string name;
  double claimed_order = 0.0;
  double measured_order = 0.0;
  std::vector<std::pair<double, double>> samples;  ///< (frequency, norm)
  bool pass = false;
  std::string rule;
};

/// Least-squares slope of log(norm) against log(<frequency>).
double fit_log_slope(const std::vector<std::pair<double, double>>& samples);

/// Generalized binomial coefficient binom(a, j), running product.
double binomial(double a, int j);

/// || (J^s - |D|^s - sum_{j=1}^{M} binom(s/2, j) (-1)^{j+1} J^{s-2j}) f ||
double js_ds_truncation(double s, int M_trunc, const SpectralField& field);

/// Order check of js_ds_truncation on unit cosines of frequency k; the
/// remainder has order s - 2(M_trunc + 1).
OrderReport js_ds_truncation_order(double s, int M_trunc,
                                   const std::vector<double>& freqs = {4, 8, 16, 32},
                                   double tol = 0.3);

struct Interval {
  double lo, hi;
};

/// max over random bumps f (support f_support) and g (support g_support) of
/// ||f |D|^{s1} J^s g|| / (||f||_inf ||g||_2), measured at s and s + 2.
/// Samples hold (order, max ratio); pass when ratio(s+2) / ratio(s) < 2.
OrderReport separated_support_decay(Interval f_support, Interval g_support,
                                    double s, double s1, int trials,
                                    std::uint64_t seed = 1,
                                    double length = 80.0, std::size_t n = 8192);

/// ||[J^s, f] g|| / (||f'||_inf ||J^{s-1} g|| + ||J^s f|| ||g||_inf), products
/// formed on a 2x padded grid.
double kato_ponce_ratio(const SpectralField& f, const SpectralField& g, double s);

/// Residual of the expansion
///   [J^N, w] = -N w' d J^{N-2} - N(N-1)/2 w'' J^{N-2} + N(N-2)/2 w'' J^{N-4}
/// (first term only for N = 1) on unit cosines of frequency k. Claimed order
/// is N - 3 (N >= 2) or -1 (N = 1); pass if measured <= claimed + 0.3.
OrderReport commutator_expansion_residual(int N, const WeightFn& w,
                                          const GridPtr& grid,
                                          const std::vector<double>& freqs = {8, 16, 32, 64});

/// max over probe_points equispaced nodes of ||(|D|^N S(t) u0)(x)||_{L^2(0,T)},
/// divided by <T>^{1/2} ||u0||. Trapezoid in time on time_samples points.
double linear_smoothing_check(const SpectralField& u0, const ModelParams& params,
                              double T, int probe_points, int time_samples = 401);

/// Default report set printed by the `check` verb.
std::vector<OrderReport> run_opcheck_suite(std::uint64_t seed = 1);

}  // namespace kbs
