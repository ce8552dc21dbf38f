#include "kbs/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "kbs/errors.hpp"
#include "kbs/kernels.hpp"

namespace kbs {
namespace {

// L sum |c_j|^2 m(xi_j)
template <class F>
double spectral_quadratic(const SpectralField& field, F multiplier) {
  const auto& xi = field.grid().wavenumbers();
  std::vector<double> m(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) m[j] = multiplier(xi[j]);
  return field.grid().length() * kernels::weighted_power_sum(field.coeffs(), m);
}

std::vector<double> squared(std::vector<double> v) {
  for (double& x : v) x *= x;
  return v;
}

// (J^r u)^2 at the nodes.
std::vector<double> bessel_density(const SpectralField& u, double r) {
  return squared(inverse_transform(bessel(u, r)));
}

void check_window(const Grid& grid, double a, double b) {
  const double half = 0.5 * grid.length();
  if (a < -half || b > half || a > b) {
    std::ostringstream os;
    os << "integration window [" << a << ", " << b << "] exits the domain [" << -half
       << ", " << half << ")";
    throw InvalidArgument(os.str());
  }
}

// Running trapezoid of g over the snapshot times.
std::vector<double> running_integral(const std::vector<double>& t,
                                     const std::vector<double>& g) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (g[i - 1] + g[i]);
  return out;
}

std::vector<double> running_max(std::vector<double> g) {
  for (std::size_t i = 1; i < g.size(); ++i) g[i] = std::max(g[i], g[i - 1]);
  return g;
}

void require_nonempty(const Trajectory& traj) {
  if (traj.empty()) throw InvalidArgument("trajectory has no snapshots");
}

std::vector<double> kato_integrand(const Trajectory& traj, double r, double R,
                                   AKind kind) {
  require_nonempty(traj);
  if (!(r >= 0.0)) throw InvalidArgument("kato_functional needs r >= 0");
  const Grid& grid = traj.grid();
  if (!(R > 0.0) || !(R < 0.5 * grid.length()))
    throw InvalidArgument("kato_functional needs 0 < R < L/2");
  std::vector<double> g;
  g.reserve(traj.snapshots.size());
  for (const auto& u : traj.snapshots) {
    const auto dens = squared(inverse_transform(fractional_A(u, r, kind)));
    g.push_back(interval_integral(dens, grid, -R, R));
  }
  return g;
}

std::vector<double> propagation_series(const Trajectory& traj, double r,
                                       double x0, double eps, double v,
                                       bool mirror) {
  require_nonempty(traj);
  if (!(eps > 0.0) || !(v > 0.0))
    throw InvalidArgument("propagation functional needs eps > 0 and v > 0");
  const Grid& grid = traj.grid();
  const double half = 0.5 * grid.length();
  std::vector<double> g;
  g.reserve(traj.snapshots.size());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const double t = traj.times[i];
    const double a = mirror ? -half : x0 + eps - v * t;
    const double b = mirror ? x0 - eps - v * t : half;
    check_window(grid, a, b);
    g.push_back(interval_integral(bessel_density(traj.snapshots[i], r), grid, a, b));
  }
  return g;
}

std::vector<double> window_integrand(const Trajectory& traj, double m, double x0,
                                     double eps, double R, double v) {
  require_nonempty(traj);
  if (!(eps > 0.0) || !(v > 0.0) || !(R > eps))
    throw InvalidArgument("window functional needs eps > 0, v > 0 and R > eps");
  const Grid& grid = traj.grid();
  const double order = m + traj.params.N;
  std::vector<double> g;
  g.reserve(traj.snapshots.size());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const double t = traj.times[i];
    const double a = x0 + eps - v * t;
    const double b = x0 + R - v * t;
    check_window(grid, a, b);
    g.push_back(interval_integral(bessel_density(traj.snapshots[i], order), grid, a, b));
  }
  return g;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

double mass(const SpectralField& field) {
  return spectral_quadratic(field, [](double) { return 1.0; });
}

double energy(const SpectralField& field, const ModelParams& params) {
  params.validate();
  const int N = params.N;
  const bool fractional = params.dispersion_mode == DispersionMode::fractional;
  const double gamma_power = fractional ? params.beta : 1.0;
  double e = spectral_quadratic(field, [&](double xi) {
    double m = 0.5 * std::pow(xi, 2 * N);
    if (params.gamma != 0.0) m -= 0.5 * params.gamma * abs_power(xi, gamma_power);
    for (std::size_t k = 1; k <= params.a.size(); ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      m -= 0.5 * sign * params.a[k - 1] * std::pow(xi, 2 * static_cast<int>(k));
    }
    return m;
  });
  const int M = params.M();
  if (M == 0) return e;
  // u^{k+2} has modes below (k+2) n/2, so this padded trapezoid is exact.
  const Grid& grid = field.grid();
  std::size_t m = static_cast<std::size_t>(M + 2) * grid.size() / 2 + 2;
  m += m % 2;
  const auto u = padded_samples(field, m);
  const double h = grid.length() / static_cast<double>(m);
  for (int k = 1; k <= M; ++k) {
    const double bk = params.b[k - 1];
    if (bk == 0.0) continue;
    double acc = 0.0;
    for (double x : u) acc += std::pow(x, k + 2);
    e -= bk / ((k + 1.0) * (k + 2.0)) * h * acc;
  }
  return e;
}

double integral_I(const SpectralField& field) {
  return field.grid().length() * field.mean_mode().real();
}

double sobolev_norm(const SpectralField& field, double s) {
  return std::sqrt(spectral_quadratic(
      field, [s](double xi) { return std::pow(1.0 + xi * xi, s); }));
}

double interval_integral(std::span<const double> samples, const Grid& grid,
                         double a, double b) {
  const std::size_t n = grid.size();
  if (samples.size() != n) throw InvalidArgument("sample count does not match grid");
  check_window(grid, a, b);
  if (a == b) return 0.0;
  const double half = 0.5 * grid.length();
  const double h = grid.spacing();
  // f on [x_k, x_{k+1}], with the periodic node x_n = L/2 carrying f_0.
  auto f = [&](std::size_t k) { return samples[k % n]; };
  auto lerp = [&](std::size_t k, double x) {
    const double xk = -half + static_cast<double>(k) * h;
    const double t = (x - xk) / h;
    return (1.0 - t) * f(k) + t * f(k + 1);
  };
  auto first = static_cast<std::size_t>(std::floor((a + half) / h));
  auto last = static_cast<std::size_t>(std::floor((b + half) / h));
  if (first >= n) first = n - 1;
  if (last >= n) last = n - 1;
  double acc = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    const double xk = -half + static_cast<double>(k) * h;
    const double lo = std::max(a, xk);
    const double hi = std::min(b, xk + h);
    if (hi <= lo) continue;
    if (lo == xk && hi == xk + h)
      acc += 0.5 * h * (f(k) + f(k + 1));
    else
      acc += 0.5 * (hi - lo) * (lerp(k, lo) + lerp(k, hi));
  }
  return acc;
}

double kato_functional(const Trajectory& traj, double r, double R, AKind kind) {
  return running_integral(traj.times, kato_integrand(traj, r, R, kind)).back();
}

double propagation_functional(const Trajectory& traj, double r, double x0,
                              double eps, double v) {
  return running_max(propagation_series(traj, r, x0, eps, v, false)).back();
}

double mirror_propagation_functional(const Trajectory& traj, double r,
                                     double x0, double eps, double v) {
  return running_max(propagation_series(traj, r, x0, eps, v, true)).back();
}

double window_smoothing_functional(const Trajectory& traj, double m, double x0,
                                   double eps, double R, double v) {
  return running_integral(traj.times, window_integrand(traj, m, x0, eps, R, v)).back();
}

double decay_weighted_functional(const SpectralField& field, double r, double s,
                                 double delta, double t, double x0) {
  if (!(delta > 0.0)) throw InvalidArgument("decay functional needs delta > 0");
  if (!(r > s)) throw InvalidArgument("decay functional needs r > s");
  if (!(t > 0.0)) throw InvalidArgument("decay functional needs t > 0");
  const Grid& grid = field.grid();
  const double p = std::floor(r - s) + 1.0 + delta;
  auto dens = bessel_density(field, r);
  for (std::size_t k = 0; k < dens.size(); ++k) {
    const double xm = std::max(0.0, x0 - grid.nodes()[k]);
    dens[k] *= std::pow(1.0 + xm * xm, -0.5 * p);
  }
  return interval_integral(dens, grid, -0.5 * grid.length(), 0.5 * grid.length());
}

const char* to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::mass: return "mass";
    case FunctionalKind::energy: return "energy";
    case FunctionalKind::integral_I: return "integral_I";
    case FunctionalKind::sobolev_norm: return "sobolev_norm";
    case FunctionalKind::kato: return "kato";
    case FunctionalKind::propagation: return "propagation";
    case FunctionalKind::mirror_propagation: return "mirror_propagation";
    case FunctionalKind::window_smoothing: return "window_smoothing";
    case FunctionalKind::decay_weighted: return "decay_weighted";
  }
  return "?";
}

FunctionalKind parse_functional_kind(const std::string& name) {
  for (auto k : {FunctionalKind::mass, FunctionalKind::energy, FunctionalKind::integral_I,
                 FunctionalKind::sobolev_norm, FunctionalKind::kato,
                 FunctionalKind::propagation, FunctionalKind::mirror_propagation,
                 FunctionalKind::window_smoothing, FunctionalKind::decay_weighted})
    if (name == to_string(k)) return k;
  throw InvalidArgument("unknown functional '" + name + "'");
}

std::string FunctionalSpec::label() const {
  std::string out = to_string(kind);
  switch (kind) {
    case FunctionalKind::mass:
    case FunctionalKind::energy:
    case FunctionalKind::integral_I:
      return out;
    case FunctionalKind::sobolev_norm:
      return out + "[s=" + fmt(s) + "]";
    case FunctionalKind::kato:
      return out + "[r=" + fmt(r) + ";R=" + fmt(R) + ";kind=" + kbs::to_string(akind) + "]";
    case FunctionalKind::propagation:
    case FunctionalKind::mirror_propagation:
      return out + "[r=" + fmt(r) + ";x0=" + fmt(x0) + ";eps=" + fmt(eps) + ";v=" + fmt(v) + "]";
    case FunctionalKind::window_smoothing:
      return out + "[m=" + fmt(r) + ";x0=" + fmt(x0) + ";eps=" + fmt(eps) + ";R=" + fmt(R) +
             ";v=" + fmt(v) + "]";
    case FunctionalKind::decay_weighted:
      return out + "[r=" + fmt(r) + ";s=" + fmt(s) + ";delta=" + fmt(delta) + ";x0=" + fmt(x0) +
             "]";
  }
  return out;
}

bool FunctionalSpec::cumulative() const {
  return kind == FunctionalKind::kato || kind == FunctionalKind::propagation ||
         kind == FunctionalKind::mirror_propagation ||
         kind == FunctionalKind::window_smoothing;
}

DiagnosticSeries collect(const Trajectory& traj,
                         const std::vector<FunctionalSpec>& specs) {
  DiagnosticSeries series;
  series.times = traj.times;
  series.params = traj.params;
  series.specs = specs;
  if (!traj.empty()) {
    series.length = traj.grid().length();
    series.n = traj.grid().size();
  }
  if (specs.empty()) return series;
  require_nonempty(traj);

  const std::size_t T = traj.snapshots.size();
  std::vector<std::vector<double>> cols;
  for (const auto& spec : specs) {
    series.columns.push_back(spec.label());
    std::vector<double> col(T);
    switch (spec.kind) {
      case FunctionalKind::mass:
        for (std::size_t i = 0; i < T; ++i) col[i] = mass(traj.snapshots[i]);
        break;
      case FunctionalKind::energy:
        for (std::size_t i = 0; i < T; ++i) col[i] = energy(traj.snapshots[i], traj.params);
        break;
      case FunctionalKind::integral_I:
        for (std::size_t i = 0; i < T; ++i) col[i] = integral_I(traj.snapshots[i]);
        break;
      case FunctionalKind::sobolev_norm:
        for (std::size_t i = 0; i < T; ++i) col[i] = sobolev_norm(traj.snapshots[i], spec.s);
        break;
      case FunctionalKind::kato:
        col = running_integral(traj.times, kato_integrand(traj, spec.r, spec.R, spec.akind));
        break;
      case FunctionalKind::propagation:
        col = running_max(propagation_series(traj, spec.r, spec.x0, spec.eps, spec.v, false));
        break;
      case FunctionalKind::mirror_propagation:
        col = running_max(propagation_series(traj, spec.r, spec.x0, spec.eps, spec.v, true));
        break;
      case FunctionalKind::window_smoothing:
        col = running_integral(
            traj.times, window_integrand(traj, spec.r, spec.x0, spec.eps, spec.R, spec.v));
        break;
      case FunctionalKind::decay_weighted:
        // t = 0 is not admissible for this functional; report 0 there.
        for (std::size_t i = 0; i < T; ++i)
          col[i] = traj.times[i] > 0.0
                       ? decay_weighted_functional(traj.snapshots[i], spec.r, spec.s,
                                                   spec.delta, traj.times[i], spec.x0)
                       : 0.0;
        break;
    }
    for (double x : col)
      if (!std::isfinite(x))
        throw InstabilityError("non-finite value in functional " + spec.label(), 0.0);
    cols.push_back(std::move(col));
  }
  series.records.assign(T, std::vector<double>(specs.size()));
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t c = 0; c < specs.size(); ++c) series.records[i][c] = cols[c][i];
  return series;
}

}  // namespace kbs
