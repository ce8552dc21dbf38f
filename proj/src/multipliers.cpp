#include "kbs/multipliers.hpp"

#include <cmath>

#include "kbs/errors.hpp"
#include "kbs/kernels.hpp"

namespace kbs {
namespace {

template <typename F>
MultiplierSymbol sample(const Grid& grid, double order, F&& symbol) {
  MultiplierSymbol m;
  m.order = order;
  const auto& xi = grid.wavenumbers();
  m.values.resize(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) m.values[j] = symbol(xi[j]);
  return m;
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

const char* to_string(AKind kind) {
  switch (kind) {
    case AKind::J: return "J";
    case AKind::absD: return "absD";
    case AKind::mixed: return "mixed";
  }
  return "?";
}

AKind parse_akind(const std::string& name) {
  if (name == "J") return AKind::J;
  if (name == "absD") return AKind::absD;
  if (name == "mixed") return AKind::mixed;
  throw InvalidArgument("unknown operator kind '" + name + "'");
}

double japanese_bracket(double xi) { return std::sqrt(1.0 + xi * xi); }

double abs_power(double xi, double s) {
  if (s == 0.0) return 1.0;
  if (xi == 0.0) return 0.0;
  return std::pow(std::abs(xi), s);
}

double dispersion_relation(const ModelParams& params, double xi) {
  const double nonlocal =
      params.dispersion_mode == DispersionMode::hilbert
          ? xi * std::abs(xi)
          : xi * abs_power(xi, params.beta);
  double w = -params.gamma * nonlocal + std::pow(xi, 2 * params.N + 1);
  for (int k = 1; k <= params.N - 1; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    w -= sign * params.a[k - 1] * std::pow(xi, 2 * k + 1);
  }
  return w;
}

SpectralField apply(const MultiplierSymbol& symbol, const SpectralField& field) {
  if (symbol.values.size() != field.size())
    throw InvalidArgument("symbol size does not match field");
  SpectralField out = field;
  kernels::multiply(out.coeffs(), symbol.values);
  out[field.grid().nyquist_slot()] = 0.0;
  return out;
}

MultiplierSymbol bessel_symbol(const Grid& grid, double s) {
  return sample(grid, s, [s](double xi) -> Complex {
    return std::pow(1.0 + xi * xi, 0.5 * s);
  });
}

MultiplierSymbol riesz_symbol(const Grid& grid, double s) {
  return sample(grid, s,
                [s](double xi) -> Complex { return abs_power(xi, s); });
}

MultiplierSymbol hilbert_symbol(const Grid& grid) {
  return sample(grid, 0.0,
                [](double xi) { return Complex(0.0, -sgn(xi)); });
}

MultiplierSymbol derivative_symbol(const Grid& grid, int k) {
  if (k < 0) throw InvalidArgument("derivative order must be nonnegative");
  const Complex ik = i_power(k);
  return sample(grid, k,
                [k, ik](double xi) { return ik * std::pow(xi, k); });
}

MultiplierSymbol fractional_A_symbol(const Grid& grid, double r, AKind kind) {
  if (!(r >= 0.0)) throw InvalidArgument("operator order r must be >= 0");
  switch (kind) {
    case AKind::J: return bessel_symbol(grid, r);
    case AKind::absD: return riesz_symbol(grid, r);
    case AKind::mixed: {
      const int whole = static_cast<int>(std::floor(r));
      const double frac = r - whole;
      const Complex ik = i_power(whole);
      return sample(grid, r, [=](double xi) {
        return ik * std::pow(xi, whole) * abs_power(xi, frac);
      });
    }
  }
  throw InvalidArgument("unknown operator kind");
}

MultiplierSymbol dispersion_symbol(const ModelParams& params,
                                   const Grid& grid) {
  params.validate();
  return sample(grid, 2.0 * params.N + 1.0, [&params](double xi) -> Complex {
    return dispersion_relation(params, xi);
  });
}

SpectralField bessel(const SpectralField& field, double s) {
  return apply(bessel_symbol(field.grid(), s), field);
}

SpectralField riesz(const SpectralField& field, double s) {
  if (s < 0.0 && std::abs(field.mean_mode()) != 0.0)
    throw InvalidArgument("negative-order Riesz potential needs a mean-zero field");
  return apply(riesz_symbol(field.grid(), s), field);
}

SpectralField hilbert(const SpectralField& field) {
  return apply(hilbert_symbol(field.grid()), field);
}

SpectralField derivative(const SpectralField& field, int k) {
  return apply(derivative_symbol(field.grid(), k), field);
}

SpectralField fractional_A(const SpectralField& field, double r, AKind kind) {
  return apply(fractional_A_symbol(field.grid(), r, kind), field);
}

SpectralField linear_propagator(const SpectralField& field, double t,
                                const ModelParams& params) {
  return linear_propagator(field, t, dispersion_symbol(params, field.grid()));
}

SpectralField linear_propagator(const SpectralField& field, double t,
                                const MultiplierSymbol& omega) {
  if (omega.values.size() != field.size())
    throw InvalidArgument("symbol size does not match field");
  SpectralField out(field.grid_ptr());
  kernels::propagate(field.coeffs(), omega.values, t, out.coeffs());
  out[field.grid().nyquist_slot()] = 0.0;
  return out;
}

}  // namespace kbs
