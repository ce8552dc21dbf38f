#include "kbs/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "kbs/errors.hpp"

namespace kbs {
namespace {

using nlohmann::json;

// Reads keys from one JSON object and rejects whatever was left unread.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) fail("missing required key '" + key + "'");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail("'" + key + "' must be a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<long>();
  }
  long integer(const std::string& key, long fallback) {
    return has(key) ? integer(key) : fallback;
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail("'" + key + "' must be true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) return {};
    const json& v = raw(key);
    if (!v.is_array()) fail("'" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail("'" + key + "' must hold numbers only");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) fail("unknown key '" + key + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(where_ + ": " + msg);
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

ModelParams parse_model(const json& j) {
  Reader r(j, "model");
  ModelParams p;
  p.N = static_cast<int>(r.integer("N"));
  p.gamma = r.number("gamma", 0.0);
  p.a = r.numbers("a");
  p.b = r.numbers("b");
  const std::string mode = r.text("dispersion", "hilbert");
  if (mode == "hilbert") {
    p.dispersion_mode = DispersionMode::hilbert;
  } else if (mode == "fractional") {
    p.dispersion_mode = DispersionMode::fractional;
    p.beta = r.number("beta");
  } else {
    r.fail("dispersion must be 'hilbert' or 'fractional'");
  }
  r.finish();
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return p;
}

GaussianSpec parse_gaussian(Reader& r) {
  GaussianSpec g;
  g.amplitude = r.number("amplitude", g.amplitude);
  g.width = r.number("width", g.width);
  g.center = r.number("center", g.center);
  if (!(g.width > 0.0)) r.fail("width must be positive");
  return g;
}

RandomHsSpec parse_random_hs(Reader& r) {
  RandomHsSpec h;
  h.s = r.number("s", h.s);
  h.delta = r.number("delta", h.delta);
  h.amplitude = r.number("amplitude", h.amplitude);
  h.envelope_width = r.number("envelope_width", h.envelope_width);
  h.center = r.number("center", h.center);
  if (r.has("seed")) {
    const long seed = r.integer("seed");
    if (seed < 0) r.fail("seed must be nonnegative");
    h.seed = static_cast<std::uint64_t>(seed);
  }
  if (!(h.delta > 0.0)) r.fail("delta must be positive");
  if (h.envelope_width < 0.0) r.fail("envelope_width must be >= 0");
  return h;
}

InitialDataSpec parse_initial_data(const json& j) {
  Reader r(j, "initial_data");
  const std::string type = r.text("type");
  InitialDataSpec out;
  if (type == "soliton") {
    SolitonSpec s;
    s.speed = r.number("speed", s.speed);
    s.center = r.number("center", s.center);
    if (r.has("b")) s.b = r.number("b");
    if (!(s.speed > 0.0)) r.fail("speed must be positive");
    out = s;
  } else if (type == "gaussian") {
    out = parse_gaussian(r);
  } else if (type == "random_hs") {
    out = parse_random_hs(r);
  } else if (type == "split") {
    SplitSpec s;
    s.x0 = r.number("x0", s.x0);
    s.gap = r.number("gap", s.gap);
    if (!(s.gap > 0.0)) r.fail("gap must be positive");
    Reader rough(r.raw("rough"), "initial_data.rough");
    s.rough = parse_random_hs(rough);
    rough.finish();
    Reader smooth(r.raw("smooth_right"), "initial_data.smooth_right");
    s.smooth_right = parse_gaussian(smooth);
    smooth.finish();
    out = s;
  } else {
    r.fail("unknown initial data type '" + type + "'");
  }
  r.finish();
  return out;
}

FunctionalSpec parse_functional(const json& j, std::size_t index) {
  Reader r(j, "diagnostics[" + std::to_string(index) + "]");
  FunctionalSpec f;
  try {
    f.kind = parse_functional_kind(r.text("functional"));
  } catch (const InvalidArgument& e) {
    r.fail(e.what());
  }
  switch (f.kind) {
    case FunctionalKind::mass:
    case FunctionalKind::energy:
    case FunctionalKind::integral_I:
      break;
    case FunctionalKind::sobolev_norm:
      f.s = r.number("s");
      break;
    case FunctionalKind::kato:
      f.r = r.number("r");
      f.R = r.number("R");
      try {
        f.akind = parse_akind(r.text("kind", "J"));
      } catch (const InvalidArgument& e) {
        r.fail(e.what());
      }
      if (f.r < 0.0 || !(f.R > 0.0)) r.fail("kato needs r >= 0 and R > 0");
      break;
    case FunctionalKind::propagation:
    case FunctionalKind::mirror_propagation:
      f.r = r.number("r");
      f.x0 = r.number("x0", 0.0);
      f.eps = r.number("eps");
      f.v = r.number("v");
      if (!(f.eps > 0.0) || !(f.v > 0.0)) r.fail("eps and v must be positive");
      break;
    case FunctionalKind::window_smoothing:
      f.r = r.number("m");
      f.x0 = r.number("x0", 0.0);
      f.eps = r.number("eps");
      f.R = r.number("R");
      f.v = r.number("v");
      if (!(f.eps > 0.0) || !(f.v > 0.0) || !(f.R > f.eps))
        r.fail("window needs eps > 0, v > 0 and R > eps");
      break;
    case FunctionalKind::decay_weighted:
      f.r = r.number("r");
      f.s = r.number("s");
      f.delta = r.number("delta");
      f.x0 = r.number("x0", 0.0);
      if (!(f.delta > 0.0) || !(f.r > f.s)) r.fail("decay needs delta > 0 and r > s");
      break;
  }
  r.finish();
  return f;
}

json spec_json(const FunctionalSpec& f) {
  json j;
  j["functional"] = to_string(f.kind);
  switch (f.kind) {
    case FunctionalKind::mass:
    case FunctionalKind::energy:
    case FunctionalKind::integral_I:
      break;
    case FunctionalKind::sobolev_norm:
      j["s"] = f.s;
      break;
    case FunctionalKind::kato:
      j["r"] = f.r;
      j["R"] = f.R;
      j["kind"] = to_string(f.akind);
      break;
    case FunctionalKind::propagation:
    case FunctionalKind::mirror_propagation:
      j["r"] = f.r;
      j["x0"] = f.x0;
      j["eps"] = f.eps;
      j["v"] = f.v;
      break;
    case FunctionalKind::window_smoothing:
      j["m"] = f.r;
      j["x0"] = f.x0;
      j["eps"] = f.eps;
      j["R"] = f.R;
      j["v"] = f.v;
      break;
    case FunctionalKind::decay_weighted:
      j["r"] = f.r;
      j["s"] = f.s;
      j["delta"] = f.delta;
      j["x0"] = f.x0;
      break;
  }
  return j;
}

json gaussian_json(const GaussianSpec& g) {
  return {{"amplitude", g.amplitude}, {"width", g.width}, {"center", g.center}};
}

json random_hs_json(const RandomHsSpec& h) {
  json j = {{"s", h.s},
            {"delta", h.delta},
            {"amplitude", h.amplitude},
            {"envelope_width", h.envelope_width},
            {"center", h.center}};
  if (h.seed) j["seed"] = *h.seed;
  return j;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  Reader r(doc, "config");
  ExperimentConfig cfg;
  cfg.name = r.text("name", cfg.name);
  if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos ||
      cfg.name[0] == '.')
    r.fail("name must be a plain, non-empty file name");
  cfg.model = parse_model(r.raw("model"));

  {
    Reader g(r.raw("grid"), "grid");
    cfg.length = g.number("length");
    const long n = g.integer("n");
    if (n < 8 || (n & (n - 1)) != 0) g.fail("n must be a power of two >= 8");
    cfg.n = static_cast<std::size_t>(n);
    if (!(cfg.length > 0.0)) g.fail("length must be positive");
    g.finish();
  }

  {
    Reader e(r.raw("evolve"), "evolve");
    EvolveConfig& ev = cfg.evolve;
    ev.t_end = e.number("t_end");
    cfg.auto_dt = e.flag("auto_dt", false);
    ev.dt = cfg.auto_dt ? e.number("dt", ev.t_end) : e.number("dt");
    cfg.safety = e.number("safety", cfg.safety);
    const std::string dealias = e.text("dealias", "two_thirds");
    if (dealias == "two_thirds") {
      ev.dealias = Dealias::two_thirds();
    } else if (dealias == "pad") {
      const double factor = e.number("pad_factor", 0.5 * (cfg.model.M() + 2));
      if (!(factor >= 1.0)) e.fail("pad_factor must be >= 1");
      ev.dealias = Dealias::pad(factor);
    } else {
      e.fail("dealias must be 'two_thirds' or 'pad'");
    }
    const long every = e.integer("output_every", 1);
    if (every < 1) e.fail("output_every must be >= 1");
    ev.output_every = static_cast<int>(every);
    ev.boundary_mass_threshold = e.number("boundary_mass_threshold", ev.boundary_mass_threshold);
    ev.growth_cap = e.number("growth_cap", ev.growth_cap);
    if (!(cfg.safety > 0.0 && cfg.safety <= 1.0)) e.fail("safety must lie in (0, 1]");
    e.finish();
    try {
      ev.validate();
    } catch (const InvalidArgument& ex) {
      throw ConfigError(std::string("evolve: ") + ex.what());
    }
  }

  cfg.initial_data = parse_initial_data(r.raw("initial_data"));

  if (r.has("diagnostics")) {
    const json& d = r.raw("diagnostics");
    if (!d.is_array()) r.fail("diagnostics must be an array");
    for (std::size_t i = 0; i < d.size(); ++i) cfg.diagnostics.push_back(parse_functional(d[i], i));
  }
  cfg.snapshot_times = r.numbers("snapshots");
  if (r.has("seed")) {
    const long seed = r.integer("seed");
    if (seed < 0) r.fail("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  cfg.output_dir = r.text("output_dir", "");
  r.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json model = {{"N", cfg.model.N},
                {"gamma", cfg.model.gamma},
                {"a", cfg.model.a},
                {"b", cfg.model.b}};
  if (cfg.model.dispersion_mode == DispersionMode::fractional) {
    model["dispersion"] = "fractional";
    model["beta"] = cfg.model.beta;
  } else {
    model["dispersion"] = "hilbert";
  }

  const EvolveConfig& ev = cfg.evolve;
  json evolve = {{"dt", ev.dt},
                 {"t_end", ev.t_end},
                 {"auto_dt", cfg.auto_dt},
                 {"safety", cfg.safety},
                 {"output_every", ev.output_every},
                 {"boundary_mass_threshold", ev.boundary_mass_threshold},
                 {"growth_cap", ev.growth_cap}};
  if (ev.dealias.kind == Dealias::Kind::pad) {
    evolve["dealias"] = "pad";
    evolve["pad_factor"] = ev.dealias.factor;
  } else {
    evolve["dealias"] = "two_thirds";
  }

  json init = std::visit(
      [](const auto& spec) -> json {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, SolitonSpec>) {
          json j = {{"type", "soliton"}, {"speed", spec.speed}, {"center", spec.center}};
          if (spec.b) j["b"] = *spec.b;
          return j;
        } else if constexpr (std::is_same_v<T, GaussianSpec>) {
          json j = gaussian_json(spec);
          j["type"] = "gaussian";
          return j;
        } else if constexpr (std::is_same_v<T, RandomHsSpec>) {
          json j = random_hs_json(spec);
          j["type"] = "random_hs";
          return j;
        } else {
          return {{"type", "split"},
                  {"x0", spec.x0},
                  {"gap", spec.gap},
                  {"rough", random_hs_json(spec.rough)},
                  {"smooth_right", gaussian_json(spec.smooth_right)}};
        }
      },
      cfg.initial_data);

  json diags = json::array();
  for (const auto& f : cfg.diagnostics) diags.push_back(spec_json(f));

  json doc = {{"name", cfg.name},
              {"model", model},
              {"grid", {{"length", cfg.length}, {"n", cfg.n}}},
              {"evolve", evolve},
              {"initial_data", init},
              {"diagnostics", diags},
              {"seed", cfg.seed}};
  if (!cfg.snapshot_times.empty()) doc["snapshots"] = cfg.snapshot_times;
  if (!cfg.output_dir.empty()) doc["output_dir"] = cfg.output_dir;
  return doc;
}

std::string config_hash(const ExperimentConfig& cfg) {
  json doc = to_json(cfg);
  doc.erase("output_dir");  // where results go does not change them
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kbs
