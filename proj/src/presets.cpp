#include <cmath>

#include "kbs/errors.hpp"
#include "kbs/experiment.hpp"

namespace kbs {
namespace {

FunctionalSpec simple(FunctionalKind kind) {
  FunctionalSpec f;
  f.kind = kind;
  return f;
}

FunctionalSpec sobolev(double s) {
  FunctionalSpec f = simple(FunctionalKind::sobolev_norm);
  f.s = s;
  return f;
}

FunctionalSpec kato(double r, double R, AKind kind) {
  FunctionalSpec f = simple(FunctionalKind::kato);
  f.r = r;
  f.R = R;
  f.akind = kind;
  return f;
}

// Rough data of the smoothing presets: H^{1.6-} localized by a Gaussian
// envelope so a large box keeps the boundary layer clean.
// Truncating rough data in Fourier leaves a small lattice-wide ringing, so
// the 1e-8 default cannot be met at t = 0 on coarse grids.
constexpr double rough_boundary_threshold = 1e-4;

RandomHsSpec rough_data() {
  RandomHsSpec h;
  h.s = 1.6;
  h.delta = 0.05;
  h.amplitude = 0.5;
  h.envelope_width = 4.0;
  h.center = 0.0;
  return h;
}

ExperimentConfig kdv_soliton() {
  ExperimentConfig c;
  c.name = "kdv-soliton";
  c.model = ModelParams::kdv(6.0);
  c.length = 40.0;
  c.n = 1024;
  c.evolve.t_end = 1.0;
  c.evolve.dt = 1e-2;
  c.auto_dt = true;
  c.safety = 0.25;
  c.evolve.output_every = 20;
  c.initial_data = SolitonSpec{4.0, -2.0, std::nullopt};
  c.diagnostics = {simple(FunctionalKind::mass), simple(FunctionalKind::energy),
                   simple(FunctionalKind::integral_I), sobolev(1.0)};
  c.snapshot_times = {0.0, 0.5, 1.0};
  c.seed = 1;
  return c;
}

ExperimentConfig smoothing(const std::string& name, ModelParams model,
                           std::vector<double> orders) {
  ExperimentConfig c;
  c.name = name;
  c.model = std::move(model);
  c.length = 600.0;
  c.n = 2048;
  c.evolve.t_end = 0.5;
  c.evolve.dt = 1e-3;
  c.evolve.output_every = 5;
  c.evolve.boundary_mass_threshold = rough_boundary_threshold;
  c.initial_data = rough_data();
  for (double r : orders)
    for (AKind k : {AKind::J, AKind::absD, AKind::mixed}) c.diagnostics.push_back(kato(r, 5.0, k));
  c.diagnostics.push_back(sobolev(1.6 + c.model.N));
  c.diagnostics.push_back(simple(FunctionalKind::mass));
  c.seed = 1;
  return c;
}

ExperimentConfig split_propagation() {
  ExperimentConfig c;
  c.name = "split-propagation";
  c.model = ModelParams::benjamin(1.0, {1.0});
  c.length = 600.0;
  c.n = 2048;
  c.evolve.t_end = 0.5;
  c.evolve.dt = 1e-3;
  c.evolve.output_every = 5;
  c.evolve.boundary_mass_threshold = rough_boundary_threshold;
  SplitSpec sp;
  sp.rough = rough_data();
  sp.rough.center = -6.0;
  sp.smooth_right = GaussianSpec{0.5, 1.0, 3.0};
  sp.x0 = 0.0;
  sp.gap = 1.0;
  c.initial_data = sp;
  const double m = 2.6;
  FunctionalSpec prop = simple(FunctionalKind::propagation);
  prop.r = m;
  prop.x0 = 0.0;
  prop.eps = 0.5;
  prop.v = 1.0;
  FunctionalSpec mirror = prop;
  mirror.kind = FunctionalKind::mirror_propagation;
  FunctionalSpec window = prop;
  window.kind = FunctionalKind::window_smoothing;
  window.R = 5.0;
  FunctionalSpec decay = simple(FunctionalKind::decay_weighted);
  decay.r = m;
  decay.s = 1.6;
  decay.delta = 0.5;
  c.diagnostics = {prop, mirror, window, decay, simple(FunctionalKind::mass)};
  c.seed = 1;
  return c;
}

ExperimentConfig kdv7() {
  ExperimentConfig c;
  c.name = "kdv7";
  c.model.N = 3;
  c.model.a = {0.0, 1.0};
  c.model.b = {1.0};
  c.length = 100.0;
  c.n = 512;
  c.evolve.t_end = 0.5;
  c.evolve.dt = 1e-3;
  c.evolve.output_every = 10;
  // group speed 7 xi^6: a narrow bump would wrap at once, so keep the
  // spectrum below xi ~ 1.5
  c.initial_data = GaussianSpec{0.5, 5.0, 0.0};
  c.diagnostics = {simple(FunctionalKind::mass), simple(FunctionalKind::energy),
                   simple(FunctionalKind::integral_I), sobolev(3.0)};
  c.seed = 1;
  return c;
}

std::vector<ExperimentConfig> gwp_threshold() {
  std::vector<ExperimentConfig> out;
  for (int M = 1; M <= 5; ++M) {
    ExperimentConfig c;
    c.name = "gwp-threshold-M" + std::to_string(M);
    c.model.N = 1;
    c.model.b.assign(static_cast<std::size_t>(M), 0.0);
    c.model.b.back() = 1.0;
    c.length = 200.0;
    c.n = 1024;
    c.evolve.t_end = 1.0;
    c.evolve.dt = 1e-2;
    c.auto_dt = true;
    c.safety = 0.5;
    c.evolve.output_every = 10;
    c.evolve.dealias = Dealias::exact_for(M);
    c.initial_data = GaussianSpec{1.5, 2.0, 0.0};
    c.diagnostics = {simple(FunctionalKind::mass), simple(FunctionalKind::energy),
                     sobolev(1.0)};
    c.seed = 1;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"kdv-soliton",       "benjamin-smoothing", "kawahara-smoothing",
          "split-propagation", "kdv7",               "gwp-threshold"};
}

std::vector<ExperimentConfig> make_preset(const std::string& name) {
  if (name == "kdv-soliton") return {kdv_soliton()};
  if (name == "benjamin-smoothing")
    return {smoothing(name, ModelParams::benjamin(1.0, {1.0}), {1.6, 2.1, 2.6, 3.6})};
  if (name == "kawahara-smoothing") {
    ModelParams p;
    p.N = 2;
    p.a = {1.0};
    p.b = {1.0};
    // group speed 5 xi^4: the box must outrun the top mode for T or waves
    // re-enter the window, and the transit time needs finer sampling
    ExperimentConfig c = smoothing(name, p, {1.6, 2.6, 3.6});
    c.length = 1600.0;
    c.evolve.dt = 2.5e-4;
    c.evolve.output_every = 1;
    return {c};
  }
  if (name == "split-propagation") return {split_propagation()};
  if (name == "kdv7") return {kdv7()};
  if (name == "gwp-threshold") return gwp_threshold();
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace kbs
