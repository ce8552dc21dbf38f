#include "kbs/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kbs/errors.hpp"

namespace kbs {

void ModelParams::validate() const {
  if (N < 1) throw InvalidArgument("N must be a positive integer");
  if (static_cast<int>(a.size()) != N - 1)
    throw InvalidArgument("a must hold N-1 coefficients");
  if (!b.empty() && b.back() == 0.0)
    throw InvalidArgument("leading nonlinear coefficient b_M must be nonzero");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::isfinite(gamma) || !std::all_of(a.begin(), a.end(), finite) ||
      !std::all_of(b.begin(), b.end(), finite))
    throw InvalidArgument("model coefficients must be finite");
  if (dispersion_mode == DispersionMode::fractional &&
      !(beta > 0.0 && beta < 2.0))
    throw InvalidArgument("fractional dispersion needs beta in (0, 2)");
}

bool ModelParams::is_linear() const {
  return std::all_of(b.begin(), b.end(), [](double v) { return v == 0.0; });
}

ModelParams ModelParams::kdv(double b1) {
  ModelParams p;
  p.N = 1;
  p.b = {b1};
  return p;
}

ModelParams ModelParams::benjamin(double gamma, std::vector<double> b) {
  ModelParams p;
  p.N = 1;
  p.gamma = gamma;
  p.b = std::move(b);
  return p;
}

ModelParams ModelParams::linear(int N, double gamma, std::vector<double> a) {
  ModelParams p;
  p.N = N;
  p.gamma = gamma;
  p.a = std::move(a);
  return p;
}

std::string describe(const ModelParams& params) {
  std::ostringstream os;
  os << "N=" << params.N << " M=" << params.M() << " gamma=" << params.gamma;
  if (params.dispersion_mode == DispersionMode::fractional)
    os << " beta=" << params.beta;
  os << " a=[";
  for (std::size_t k = 0; k < params.a.size(); ++k)
    os << (k ? "," : "") << params.a[k];
  os << "] b=[";
  for (std::size_t k = 0; k < params.b.size(); ++k)
    os << (k ? "," : "") << params.b[k];
  os << "]";
  return os.str();
}

}  // namespace kbs
