#pragma once

#include <vector>

#include "kbs/field.hpp"
#include "kbs/model.hpp"

namespace kbs {

/// Fourier multiplier sampled on a grid's wavenumber lattice (FFT order).
struct MultiplierSymbol {
  std::vector<Complex> values;
  double order = 0.0;  ///< nominal pseudo-differential order
};

enum class AKind { J, absD, mixed };

const char* to_string(AKind kind);
AKind parse_akind(const std::string& name);

/// Multiplies every coefficient by the symbol and zeroes the Nyquist slot.
SpectralField apply(const MultiplierSymbol& symbol, const SpectralField& field);

// Symbol builders. All take the grid whose lattice they sample.
MultiplierSymbol bessel_symbol(const Grid& grid, double s);
MultiplierSymbol riesz_symbol(const Grid& grid, double s);
MultiplierSymbol hilbert_symbol(const Grid& grid);
MultiplierSymbol derivative_symbol(const Grid& grid, int k);
MultiplierSymbol fractional_A_symbol(const Grid& grid, double r, AKind kind);
/// omega(xi) = -gamma xi |xi| + xi^{2N+1} - sum_k (-1)^k a_k xi^{2k+1};
/// fractional mode uses -gamma xi |xi|^beta for the first term.
MultiplierSymbol dispersion_symbol(const ModelParams& params, const Grid& grid);

/// Scalar evaluations of the same formulas (used by symbol builders and by
/// code that needs a single lattice value).
double japanese_bracket(double xi);
double abs_power(double xi, double s);  ///< |xi|^s with 0^0 = 1, 0^s = 0
double dispersion_relation(const ModelParams& params, double xi);

/// J^s: multiplies by <xi>^s.
SpectralField bessel(const SpectralField& field, double s);
/// |D|^s: multiplies by |xi|^s. Negative s requires a mean-zero field.
SpectralField riesz(const SpectralField& field, double s);
/// Hilbert transform, symbol -i sgn(xi).
SpectralField hilbert(const SpectralField& field);
/// d^k/dx^k, symbol (i xi)^k.
SpectralField derivative(const SpectralField& field, int k = 1);
/// J^r, |D|^r or d^{floor r} |D|^{frac r} for r >= 0.
SpectralField fractional_A(const SpectralField& field, double r, AKind kind);

/// S(t) f = (exp(i t omega) f^)^v
SpectralField linear_propagator(const SpectralField& field, double t,
                                const ModelParams& params);
/// Same as above with a precomputed dispersion symbol.
SpectralField linear_propagator(const SpectralField& field, double t,
                                const MultiplierSymbol& omega);

}  // namespace kbs
