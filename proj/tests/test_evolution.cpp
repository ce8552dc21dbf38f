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

SpectralField gaussian(const GridPtr& g, double amp, double width, double center = 0.0) {
  return transform(sample(*g, [&](double x) {
                     const double y = (x - center) / width;
                     return amp * std::exp(-y * y);
                   }),
                   g);
}

ModelParams linear_kdv() { return ModelParams::linear(1, 0.0); }

}  // namespace

TEST_CASE("nonlinearity examples") {
  auto g = make_grid(2 * pi, 256);
  auto c = transform(std::vector<double>(256, 0.7), g);
  ModelParams p;
  p.b = {0.3, -1.0, 2.0};
  CHECK(max_coeff(nonlinearity(c, p, Dealias::two_thirds())) == 0.0);

  auto s = transform(sample(*g, [](double x) { return std::sin(x); }), g);
  auto half_sin2 = transform(sample(*g, [](double x) { return 0.5 * std::sin(2 * x); }), g);
  for (Dealias d : {Dealias::two_thirds(), Dealias::pad(1.5), Dealias::exact_for(3)}) {
    CHECK(max_coeff_diff(nonlinearity(s, ModelParams::kdv(1.0), d), half_sin2) < 1e-14);
  }

  // u^2 u_x for u = sin: product built directly in physical space, then a
  // naive DFT
  ModelParams m2;
  m2.b = {0.0, 1.0};
  auto direct = naive_dft(sample(*g, [](double x) {
                            return std::sin(x) * std::sin(x) * std::cos(x);
                          }),
                          *g);
  auto got = nonlinearity(s, m2, Dealias::two_thirds());
  double err = 0.0;
  for (std::size_t j = 0; j < 256; ++j) err = std::max(err, std::abs(got[j] - direct[j]));
  CHECK(err < 1e-14);
  CHECK(std::abs(got[g->slot(1)] - 0.125) < 1e-14);
  CHECK(std::abs(got[g->slot(3)] + 0.125) < 1e-14);
}

TEST_CASE("two-thirds rule drops the aliased band") {
  auto g = make_grid(2 * pi, 32);
  SpectralField f(g);
  f[g->slot(12)] = 0.5;
  f[g->slot(-12)] = 0.5;
  auto out = nonlinearity(f, ModelParams::kdv(1.0), Dealias::two_thirds());
  CHECK(max_coeff(out) == 0.0);  // 12 >= 32/3
}

TEST_CASE("linear step and evolve equal the propagator") {
  auto g = make_grid(30.0, 256);
  auto u0 = gaussian(g, 1.0, 1.5);
  for (ModelParams p : {linear_kdv(), ModelParams::linear(2, 0.5, {1.0})}) {
    auto stepped = step_ifrk4(u0, 0.01, p, Dealias::two_thirds());
    auto exact = linear_propagator(u0, 0.01, p);
    CHECK(l2_distance(stepped, exact) <= 1e-13 * l2_norm(exact));

    EvolveConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.37;
    cfg.output_every = 5;
    cfg.boundary_mass_threshold = 1.0;
    auto traj = evolve(u0, cfg, p);
    auto ref = linear_propagator(u0, 0.37, p);
    CHECK(l2_distance(traj.final(), ref) <= 1e-10 * l2_norm(ref));
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 0.37);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  }
}

TEST_CASE("nonlinear run invariants") {
  auto g = make_grid(60.0, 512);
  auto u0 = gaussian(g, 1.0, 2.0);
  const ModelParams p = ModelParams::benjamin(1.0, {1.0});
  EvolveConfig cfg;
  cfg.dt = std::min(0.01, suggest_dt(u0, p, 0.5));
  cfg.t_end = 1.0;
  cfg.output_every = 10;
  cfg.dealias = Dealias::exact_for(1);
  auto traj = evolve(u0, cfg, p);
  const double m0 = mass(u0), e0 = energy(u0, p);
  for (const auto& u : traj.snapshots) {
    CHECK(hermitian_defect(u) < 1e-12);
    CHECK(std::abs(mass(u) - m0) / m0 < 1e-7);
    CHECK(std::abs(energy(u, p) - e0) / (1 + std::abs(e0)) < 1e-5);
    CHECK(u[0] == u0[0]);
  }
}

TEST_CASE("instability and boundary contamination are reported") {
  auto g = make_grid(40.0, 256);
  auto big = gaussian(g, 40.0, 1.0);
  EvolveConfig cfg;
  cfg.dt = 0.5;
  cfg.t_end = 5.0;
  ModelParams p;
  p.b = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(evolve(big, cfg, p), InstabilityError);

  // mass spreads into the outer layer of a small box
  auto small = make_grid(20.0, 256);
  auto u0 = gaussian(small, 0.1, 0.3);
  EvolveConfig c2;
  c2.dt = 0.01;
  c2.t_end = 2.0;
  c2.output_every = 10;
  try {
    evolve(u0, c2, ModelParams::kdv(1.0));
    FAIL("expected contamination");
  } catch (const BoundaryContaminationError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.fraction() > c2.boundary_mass_threshold);
  }
}

TEST_CASE("suggest_dt scaling") {
  auto g = make_grid(40.0, 256);
  const ModelParams p = ModelParams::kdv(1.0);
  SpectralField zero(g);
  CHECK(suggest_dt(zero, p, 0.5) == doctest::Approx(0.5 / suggest_dt_guard));
  auto u = gaussian(g, 1.0, 1.0);
  const double d1 = suggest_dt(u, p, 0.5);
  CHECK(suggest_dt(2.0 * u, p, 0.5) == doctest::Approx(d1 / 2).epsilon(1e-9));
  auto fine = make_grid(40.0, 512);
  CHECK(suggest_dt(gaussian(fine, 1.0, 1.0), p, 0.5) == doctest::Approx(d1 / 2).epsilon(1e-9));
  CHECK_THROWS_AS(suggest_dt(u, p, 0.0), InvalidArgument);
}

TEST_CASE("config validation") {
  EvolveConfig c;
  c.dt = 2.0;
  c.t_end = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK_THROWS_AS(Dealias::pad(0.5), InvalidArgument);
  ModelParams p;
  p.b = {1.0, 0.0};
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  CHECK(Dealias::exact_for(2).factor == 2.0);
}

TEST_CASE("picard examples") {
  auto g = make_grid(40.0, 128);
  auto u0 = gaussian(g, 0.1, 1.5);
  auto lin = picard_solve(u0, 0.05, linear_kdv(), 1e-12, 5, 11);
  CHECK(lin.iterations == 1);
  CHECK(l2_distance(lin.trajectory.final(), linear_propagator(u0, 0.05, linear_kdv())) == 0.0);

  const ModelParams kdv = ModelParams::kdv(1.0);
  auto pic = picard_solve(u0, 0.05, kdv, 1e-10, 15, 201);
  EvolveConfig cfg;
  cfg.t_end = 0.05;
  cfg.dt = 0.05 / 200;
  cfg.output_every = 200;
  auto rk = evolve(u0, cfg, kdv);
  CHECK(l2_distance(pic.trajectory.final(), rk.final()) < 1e-6);
  CHECK(pic.trajectory.times.size() == 201);

  auto big = gaussian(g, 50.0, 1.0);
  CHECK_THROWS_AS(picard_solve(big, 2.0, kdv, 1e-10, 10, 21), ConvergenceError);
}

TEST_CASE("IFRK4 converges at fourth order") {
  // reference: Richardson combination of two Picard quadratures, whose
  // trapezoid error is even in the node spacing
  auto g = make_grid(40.0, 128);
  auto u0 = gaussian(g, 1.5, 1.5);
  const ModelParams p = ModelParams::kdv(1.0);
  const double T = 0.2;
  auto coarse = picard_solve(u0, T, p, 1e-14, 60, 2001).trajectory.final();
  auto fine = picard_solve(u0, T, p, 1e-14, 60, 4001).trajectory.final();
  auto ref = (4.0 / 3.0) * fine - (1.0 / 3.0) * coarse;

  std::vector<std::pair<double, double>> pts;
  for (int steps : {4, 8, 16, 32}) {
    EvolveConfig cfg;
    cfg.t_end = T;
    cfg.dt = T / steps;
    cfg.output_every = steps;
    cfg.boundary_mass_threshold = 1.0;
    pts.emplace_back(cfg.dt, l2_distance(evolve(u0, cfg, p).final(), ref));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [h, e] : pts) {
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(pts.size());
  const double order = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  MESSAGE("IFRK4 observed order " << order << " errors " << pts.front().second << " .. "
                                  << pts.back().second);
  CHECK(order >= 3.8);
}
