#include "doctest.h"

#include "kbs/diagnostics.hpp"
#include "kbs/errors.hpp"
#include "kbs/evolution.hpp"
#include "kbs/initial_data.hpp"
#include "kbs/multipliers.hpp"
#include "support.hpp"

using namespace kbs;
using namespace testing;

namespace {

// Piecewise-linear integral of node values over [a, b], periodic node at L/2.
// Cells are visited one by one and clipped.
double pl_integral(const std::vector<double>& f, const Grid& g, double a, double b) {
  const std::size_t n = g.size();
  const double h = g.spacing(), x0 = -0.5 * g.length();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xl = x0 + h * static_cast<double>(k), xr = xl + h;
    const double lo = std::max(a, xl), hi = std::min(b, xr);
    if (hi <= lo) continue;
    const double fl = f[k], fr = f[(k + 1) % n];
    auto at = [&](double x) { return fl + (fr - fl) * (x - xl) / h; };
    acc += 0.5 * (hi - lo) * (at(lo) + at(hi));
  }
  return acc;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& g) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (g[i] + g[i - 1]);
  return s;
}

// Linear KdV run from u0 = A cos(k x): u = A cos(k x + k^3 t).
struct PlaneWaveRun {
  GridPtr g;
  double A, k;
  Trajectory traj;
  ModelParams p = ModelParams::linear(1, 0.0);

  PlaneWaveRun(double L, std::size_t n, int mode, double amp, double T, double dt)
      : g(make_grid(L, n)), A(amp), k(2 * pi * mode / L) {
    auto u0 = transform(sample(*g, [&](double x) { return A * std::cos(k * x); }), g);
    EvolveConfig c;
    c.dt = dt;
    c.t_end = T;
    c.boundary_mass_threshold = 1.0;
    traj = evolve(u0, c, p);
  }

  // exact A^r u at x, t for the three operator kinds
  double op(double x, double t, double r, AKind kind) const {
    const double phase = k * x + k * k * k * t;
    switch (kind) {
      case AKind::J: return std::pow(1 + k * k, 0.5 * r) * A * std::cos(phase);
      case AKind::absD: return std::pow(k, r) * A * std::cos(phase);
      case AKind::mixed: {
        const double m = std::floor(r);
        return std::pow(k, r) * A * std::cos(phase + 0.5 * pi * m);
      }
    }
    return 0.0;
  }

  std::vector<double> density(double t, double r, AKind kind) const {
    return sample(*g, [&](double x) {
      const double v = op(x, t, r, kind);
      return v * v;
    });
  }
};

}  // namespace

TEST_CASE("scalar functionals on closed forms") {
  auto g = make_grid(2 * pi, 64);
  SpectralField zero(g);
  const ModelParams kdv = ModelParams::kdv(2.5);
  CHECK(mass(zero) == 0.0);
  CHECK(energy(zero, kdv) == 0.0);
  CHECK(integral_I(zero) == 0.0);
  CHECK(sobolev_norm(zero, 2.0) == 0.0);

  auto s = transform(sample(*g, [](double x) { return std::sin(x); }), g);
  CHECK(mass(s) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(energy(s, kdv) == doctest::Approx(pi / 2).epsilon(1e-13));
  CHECK(std::abs(integral_I(s)) < 1e-15);
  CHECK(sobolev_norm(s, 0.0) == doctest::Approx(std::sqrt(mass(s))).epsilon(1e-12));
  for (double sv : {0.5, 1.0, 3.0})
    CHECK(sobolev_norm(s, sv) == doctest::Approx(std::pow(2.0, sv / 2) * sobolev_norm(s, 0.0)));

  // Benjamin energy on sin: 1/2 pi - gamma/2 pi + cubic term 0
  const ModelParams ben = ModelParams::benjamin(0.8, {1.0});
  CHECK(energy(s, ben) == doctest::Approx(0.5 * pi - 0.4 * pi).epsilon(1e-13));

  auto big = make_grid(40.0, 512);
  auto gauss = transform(sample(*big, [](double x) { return std::exp(-x * x); }), big);
  CHECK(std::abs(integral_I(gauss) - std::sqrt(pi)) < 1e-10);

  auto f = random_field(big, 17);
  double prev = 0.0;
  for (double sv = -1.0; sv <= 4.0; sv += 0.25) {
    const double v = sobolev_norm(f, sv);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(mass(f) == doctest::Approx(sobolev_norm(f, 0.0) * sobolev_norm(f, 0.0)).epsilon(1e-12));
}

TEST_CASE("energy agrees with physical quadrature") {
  // u^{k+2} integrals against a brute-force evaluation of the field
  auto g = make_grid(20.0, 128);
  auto f = random_field(g, 23);
  ModelParams p;
  p.N = 2;
  p.gamma = 0.0;
  p.a = {0.7};
  p.b = {0.4, -0.3};
  double cubic = 0.0, quartic = 0.0;
  const int m = 4096;
  for (int i = 0; i < m; ++i) {
    const double x = -10.0 + 20.0 * i / m;
    const double u = evaluate(f, x);
    cubic += u * u * u;
    quartic += u * u * u * u;
  }
  cubic *= 20.0 / m;
  quartic *= 20.0 / m;
  const double d2 = l2_norm(derivative(f, 2)), d1 = l2_norm(derivative(f, 1));
  const double want = 0.5 * d2 * d2 + 0.5 * 0.7 * d1 * d1 - 0.4 / 6 * cubic + 0.3 / 12 * quartic;
  CHECK(energy(f, p) == doctest::Approx(want).epsilon(1e-11));
}

TEST_CASE("interval_integral is exact on linear data") {
  auto g = make_grid(10.0, 64);
  auto lin = sample(*g, [](double x) { return 2.0 * x + 1.0; });
  for (auto [a, b] : {std::pair{-3.3, 2.71}, {-4.9, -4.85}, {0.0, 0.0}, {-1.0, 4.84}}) {
    CHECK(interval_integral(lin, *g, a, b) ==
          doctest::Approx(b * b - a * a + (b - a)).epsilon(1e-13));
  }
  std::vector<double> ones(64, 1.0);
  CHECK(interval_integral(ones, *g, -5.0, 5.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(interval_integral(ones, *g, -6.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(interval_integral(ones, *g, 1.0, 5.5), InvalidArgument);
}

TEST_CASE("time functionals match quadrature of the exact linear solution") {
  const PlaneWaveRun run(40.0, 512, 3, 0.6, 0.2, 0.01);
  const auto& t = run.traj.times;
  const double R = 5.0;
  for (AKind kind : {AKind::J, AKind::absD, AKind::mixed}) {
    for (double r : {0.0, 1.0, 2.5}) {
      std::vector<double> g;
      for (double ti : t) g.push_back(pl_integral(run.density(ti, r, kind), *run.g, -R, R));
      const double want = trapezoid(t, g);
      CHECK(kato_functional(run.traj, r, R, kind) == doctest::Approx(want).epsilon(1e-8));
    }
  }

  const double x0 = 0.3, eps = 0.5, v = 1.0, m = 1.5;
  std::vector<double> prop, mirror, window;
  for (double ti : t) {
    prop.push_back(pl_integral(run.density(ti, 1.5, AKind::J), *run.g, x0 + eps - v * ti, 20.0));
    mirror.push_back(pl_integral(run.density(ti, 1.5, AKind::J), *run.g, -20.0, x0 - eps - v * ti));
    window.push_back(pl_integral(run.density(ti, m + 1, AKind::J), *run.g, x0 + eps - v * ti,
                                 x0 + 4.0 - v * ti));
  }
  CHECK(propagation_functional(run.traj, 1.5, x0, eps, v) ==
        doctest::Approx(*std::max_element(prop.begin(), prop.end())).epsilon(1e-8));
  CHECK(mirror_propagation_functional(run.traj, 1.5, x0, eps, v) ==
        doctest::Approx(*std::max_element(mirror.begin(), mirror.end())).epsilon(1e-8));
  CHECK(window_smoothing_functional(run.traj, m, x0, eps, 4.0, v) ==
        doctest::Approx(trapezoid(t, window)).epsilon(1e-8));

  // and the Kato value converges to the continuous closed form
  // int_0^T int_{-R}^{R} A^2 <k>^2r cos^2 = A^2 <k>^2r [R T + sin(2kR) sin(2 k^3 T) / (4 k k^3)]
  const PlaneWaveRun fine(40.0, 4096, 3, 0.6, 0.2, 0.0005);
  const double k = fine.k, w = k * k * k, A = 0.6;
  const double cont = A * A * (1 + k * k) * (R * 0.2 + std::sin(2 * k * R) * std::sin(2 * w * 0.2) / (4 * k * w));
  CHECK(kato_functional(fine.traj, 1.0, R, AKind::J) == doctest::Approx(cont).epsilon(1e-5));
}

TEST_CASE("functional monotonicity") {
  auto g = make_grid(60.0, 512);
  RandomHsSpec spec;
  spec.s = 1.0;
  spec.amplitude = 0.3;
  spec.envelope_width = 4.0;
  auto u0 = random_hs_field(spec, g, 5);
  EvolveConfig c;
  c.dt = 2e-3;
  c.t_end = 0.2;
  c.output_every = 5;
  c.boundary_mass_threshold = 1.0;  // only monotonicity is checked here
  const ModelParams p = ModelParams::benjamin(1.0, {1.0});
  auto traj = evolve(u0, c, p);

  double prev = 0.0;
  for (double R : {1.0, 2.0, 3.5, 7.0}) {
    const double v = kato_functional(traj, 1.5, R, AKind::absD);
    CHECK(v >= prev);
    prev = v;
  }
  FunctionalSpec ks;
  ks.kind = FunctionalKind::kato;
  ks.r = 2.0;
  ks.R = 5.0;
  FunctionalSpec fast, slow;
  fast.kind = slow.kind = FunctionalKind::propagation;
  fast.r = slow.r = 1.5;
  fast.v = 2.0;
  slow.v = 0.5;
  auto series = collect(traj, {ks, fast, slow});
  for (std::size_t i = 1; i < series.times.size(); ++i) {
    CHECK(series.records[i][0] >= series.records[i - 1][0]);
    CHECK(series.records[i][1] >= series.records[i - 1][1]);
  }
  // half-line nesting holds per snapshot
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    Trajectory one;
    one.times = {traj.times[i]};
    one.snapshots = {traj.snapshots[i]};
    one.params = p;
    CHECK(propagation_functional(one, 1.5, 0.0, 0.5, 2.0) >=
          propagation_functional(one, 1.5, 0.0, 0.5, 0.5));
  }
  prev = 1e300;
  for (double d : {0.1, 0.5, 1.0, 2.0}) {
    const double v = decay_weighted_functional(traj.final(), 1.8, 1.0, d, 0.2);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("decay functional") {
  auto g = make_grid(40.0, 1024);
  SpectralField zero(g);
  CHECK(decay_weighted_functional(zero, 2.0, 1.0, 0.5, 1.0) == 0.0);
  // J^2 = 1 - d^2 is local, so a bump right of 0 keeps J^2 u there and the
  // weight is 1 on its support
  auto u = transform(sample(*g, [&](double x) {
                       const double y = x - 5.0;
                       return y > -3 && y < 3 ? std::exp(-1.0 / (1 - y * y / 9.0)) : 0.0;
                     }),
                     g);
  const double full = sobolev_norm(u, 2.0);
  CHECK(decay_weighted_functional(u, 2.0, 1.0, 0.5, 1.0) == doctest::Approx(full * full).epsilon(1e-6));
  CHECK_THROWS_AS(decay_weighted_functional(u, 1.0, 1.0, 0.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(decay_weighted_functional(u, 2.0, 1.0, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(decay_weighted_functional(u, 2.0, 1.0, 0.5, 0.0), InvalidArgument);
}

TEST_CASE("collect") {
  auto g = make_grid(40.0, 256);
  const ModelParams kdv = ModelParams::kdv(6.0);
  auto u0 = transform(soliton_profile(*g, 4.0, 6.0, -2.0), g);
  EvolveConfig c;
  c.dt = 1e-3;
  c.t_end = 0.1;
  c.output_every = 10;
  auto traj = evolve(u0, c, kdv);

  auto empty = collect(traj, {});
  CHECK(empty.columns.empty());
  CHECK(empty.records.empty());

  FunctionalSpec m;
  auto series = collect(traj, {m});
  REQUIRE(series.records.size() == traj.times.size());
  CHECK(series.columns == std::vector<std::string>{"mass"});
  for (const auto& row : series.records)
    CHECK(row[0] == doctest::Approx(series.records[0][0]).epsilon(1e-8));

  FunctionalSpec zero_traj;
  zero_traj.kind = FunctionalKind::kato;
  zero_traj.R = 3.0;
  Trajectory z;
  z.times = {0.0, 0.5};
  z.snapshots = {SpectralField(g), SpectralField(g)};
  CHECK(collect(z, {zero_traj}).final_value(0) == 0.0);
  CHECK(propagation_functional(z, 1.0, 0.0, 0.5, 1.0) == 0.0);
  CHECK(window_smoothing_functional(z, 1.0, 0.0, 0.5, 2.0, 1.0) == 0.0);

  FunctionalSpec away;
  away.kind = FunctionalKind::window_smoothing;
  away.x0 = 19.0;
  away.R = 3.0;
  CHECK_THROWS_AS(collect(traj, {away}), InvalidArgument);
  FunctionalSpec wide = zero_traj;
  wide.R = 25.0;
  CHECK_THROWS_AS(collect(traj, {wide}), InvalidArgument);

  CHECK(parse_functional_kind("decay_weighted") == FunctionalKind::decay_weighted);
  CHECK_THROWS_AS(parse_functional_kind("nope"), InvalidArgument);
}
