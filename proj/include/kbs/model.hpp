#pragma once

#include <string>
#include <vector>

namespace kbs {

enum class DispersionMode { hilbert, fractional };

/// One member of the family
///   u_t + gamma H u_xx + (-1)^{N+1} d^{2N+1} u + sum_k a_k d^{2k+1} u
///       + sum_k b_k u^k u_x = 0,
/// or, in fractional mode, with gamma d |D|^beta replacing gamma H d^2.
struct ModelParams {
  int N = 1;
  double gamma = 0.0;
  std::vector<double> a;  ///< a_1 .. a_{N-1}
  std::vector<double> b;  ///< b_1 .. b_M, b_M != 0
  DispersionMode dispersion_mode = DispersionMode::hilbert;
  double beta = 1.0;  ///< only read in fractional mode, beta in (0, 2)

  int M() const { return static_cast<int>(b.size()); }
  /// Throws InvalidArgument on any violated invariant.
  void validate() const;
  /// True when every b_k is zero (purely linear run). Validation forbids
  /// b_M = 0, so this only holds for the explicit linear form with an
  /// empty b; see ModelParams::linear().
  bool is_linear() const;

  static ModelParams kdv(double b1);
  static ModelParams benjamin(double gamma, std::vector<double> b);
  /// Linear dispersive flow with no nonlinearity (M = 0).
  static ModelParams linear(int N, double gamma, std::vector<double> a = {});
};

std::string describe(const ModelParams& params);

}  // namespace kbs
