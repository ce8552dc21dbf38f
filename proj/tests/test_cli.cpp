#include "doctest.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kbs/errors.hpp"
#include "kbs/experiment.hpp"
#include "kbs/initial_data.hpp"
#include "support.hpp"

using namespace kbs;
using namespace testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() /
                     ("kbs_test_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void dump(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

// exit status of the CLI with the given argument string
int cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " '" + std::string(KBS_CLI_PATH) + "' " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

json small_config() {
  return json::parse(R"({
    "name": "small",
    "seed": 5,
    "model": {"N": 1, "gamma": 0.5, "a": [], "b": [1.0]},
    "grid": {"length": 30.0, "n": 128},
    "evolve": {"dt": 0.01, "t_end": 0.2, "output_every": 5, "boundary_mass_threshold": 1e-3},
    "initial_data": {"type": "random_hs", "s": 2.0, "delta": 0.1, "amplitude": 0.3,
                     "envelope_width": 4.0},
    "diagnostics": [{"functional": "mass"}, {"functional": "energy"},
                    {"functional": "sobolev_norm", "s": 1.0}],
    "snapshots": [0.0, 0.2]
  })");
}

}  // namespace

TEST_CASE("strict config parsing") {
  CHECK_NOTHROW(parse_config(small_config()));

  json j = small_config();
  j["colour"] = 1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["model"]["nu"] = 0.1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["evolve"]["dtt"] = 0.1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["initial_data"]["sigma"] = 0.1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["diagnostics"][0]["s"] = 1.0;  // mass takes no order
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = small_config();
  j["grid"]["n"] = 100;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["grid"]["length"] = -1.0;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["model"]["gamma"] = "half";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["initial_data"]["type"] = "sawtooth";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["diagnostics"][0]["functional"] = "entropy";
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  CHECK_THROWS_AS(load_config("/nonexistent/x.json"), ConfigError);
}

TEST_CASE("config round trip and hash") {
  const ExperimentConfig a = parse_config(small_config());
  const json ja = to_json(a);
  const ExperimentConfig b = parse_config(ja);
  CHECK(to_json(b) == ja);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  ExperimentConfig c = a;
  c.seed = 6;
  CHECK(config_hash(c) != config_hash(a));
  for (const auto& name : preset_names())
    for (const auto& cfg : make_preset(name)) {
      CAPTURE(name);
      CHECK(config_hash(parse_config(to_json(cfg))) == config_hash(cfg));
    }
  CHECK_THROWS_AS(make_preset("nope"), ConfigError);
  CHECK(make_preset("gwp-threshold").size() == 5);
}

TEST_CASE("random_hs coefficients follow the prescribed envelope") {
  auto g = make_grid(50.0, 512);
  RandomHsSpec spec;
  spec.s = 1.6;
  spec.delta = 0.05;
  spec.amplitude = 0.7;
  const auto u = random_hs_field(spec, g, 9);
  double err = 0.0;
  for (long m = 1; m < 512 / 2; ++m) {
    const double xi = 2 * pi * m / 50.0;
    const double want = 0.7 * std::sqrt(2 * pi / 50.0) * std::pow(1 + xi * xi, -(1.6 + 0.5 + 0.05) / 2);
    err = std::max(err, std::abs(std::abs(u[g->slot(m)]) - want) / want);
  }
  CHECK(err < 1e-12);
  CHECK(hermitian_defect(u) == 0.0);
  // zero mode: real, <0> = 1
  CHECK(u[0].imag() == 0.0);
  CHECK(std::abs(u[0].real()) <= 0.7 * std::sqrt(2 * pi / 50.0));

  // same phases at every s, so norms order with s
  double prev = 1e300;
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    spec.s = s;
    const double nrm = l2_norm(random_hs_field(spec, g, 9));
    CHECK(nrm < prev);
    prev = nrm;
  }
  spec.s = 1.0;
  CHECK(l2_distance(random_hs_field(spec, g, 9), random_hs_field(spec, g, 9)) == 0.0);
  CHECK(l2_distance(random_hs_field(spec, g, 9), random_hs_field(spec, g, 10)) > 0.0);
}

TEST_CASE("split data vanishes right of x0 when the bump is off") {
  auto g = make_grid(60.0, 1024);
  SplitSpec sp;
  sp.rough.s = 0.5;
  sp.x0 = 3.0;
  sp.gap = 1.0;
  sp.smooth_right.amplitude = 0.0;
  const auto u = inverse_transform(generate_initial_data(sp, g, ModelParams::kdv(1.0), 2));
  // right of x0 only the dropped Nyquist mode is left: a pure +-c alternation
  double right = 0.0, alt = 0.0, left = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double x = g->nodes()[k];
    if (x >= sp.x0 && x < 29.0) {
      right = std::max(right, std::abs(u[k]));
      alt = std::max(alt, std::abs(u[k] + u[k + 1]));
    }
    if (x < sp.x0 - sp.gap - 1.0) left = std::max(left, std::abs(u[k]));
  }
  CHECK(alt < 1e-12);
  CHECK(right < 1e-2);
  CHECK(left > 0.01);
}

TEST_CASE("soliton data") {
  auto g = make_grid(40.0, 1024);
  const auto prof = soliton_profile(*g, 4.0, 6.0, -2.0);
  // kappa = 1: peak 12 / 6 at the center node
  const auto& x = g->nodes();
  for (std::size_t k = 0; k < prof.size(); ++k) {
    const double c = std::cosh(x[k] + 2.0);
    CHECK(prof[k] == doctest::Approx(2.0 / (c * c)).epsilon(1e-14));
  }
  CHECK(soliton_residual(g, 4.0, 6.0, -2.0) < 1e-6);

  SolitonSpec s;
  CHECK_NOTHROW(generate_initial_data(s, g, ModelParams::kdv(6.0), 0));
  CHECK_THROWS_AS(generate_initial_data(s, g, ModelParams::benjamin(1.0, {6.0}), 0), ConfigError);
  s.b = 5.0;
  CHECK_THROWS_AS(generate_initial_data(s, g, ModelParams::kdv(6.0), 0), ConfigError);
  // a narrow soliton the 1024-point grid cannot resolve
  SolitonSpec sharp;
  sharp.speed = 4000.0;
  CHECK_THROWS_AS(generate_initial_data(sharp, g, ModelParams::kdv(6.0), 0), ConfigError);
}

TEST_CASE("run writes csv and manifest through a staging rename") {
  const fs::path root = scratch("run");
  const ExperimentConfig cfg = parse_config(small_config());
  const RunOutcome out = run_experiment(cfg, root);
  REQUIRE(out.exit_code == exit_ok);
  CHECK(out.directory == root / "small");
  CHECK(fs::exists(root / "small" / "diagnostics.csv"));
  CHECK(fs::exists(root / "small" / "snapshots" / "snapshot_001.txt"));
  int entries = 0;
  for (const auto& e : fs::directory_iterator(root)) {
    ++entries;
    CHECK(e.path().filename() == "small");
  }
  CHECK(entries == 1);

  const json m = json::parse(slurp(root / "small" / "manifest.json"));
  CHECK(m["config_hash"] == config_hash(cfg));
  CHECK(m["exit_code"] == 0);
  CHECK(m["seed"] == 5);
  CHECK(m["files"].size() == 3);
  CHECK(parse_config(m["config"]).seed == 5);

  const std::string csv = slurp(root / "small" / "diagnostics.csv");
  CHECK(csv.rfind("time,mass,energy,sobolev_norm", 0) == 0);
  CHECK(csv == series_csv(*out.series));
  // rerun into the same place: identical bytes
  run_experiment(cfg, root);
  CHECK(slurp(root / "small" / "diagnostics.csv") == csv);
  fs::remove_all(root);
}

TEST_CASE("cli verbs and exit codes") {
  const fs::path root = scratch("cli");
  const fs::path good = root / "good.json";
  dump(good, small_config());

  CHECK(cli("run '" + good.string() + "' --out '" + (root / "a").string() + "'") == 0);
  CHECK(cli("run '" + good.string() + "' --seed 11 --out '" + (root / "b").string() + "'") == 0);
  CHECK(json::parse(slurp(root / "a" / "small" / "manifest.json"))["seed"] == 5);
  CHECK(json::parse(slurp(root / "b" / "small" / "manifest.json"))["seed"] == 11);
  CHECK(slurp(root / "a" / "small" / "diagnostics.csv") !=
        slurp(root / "b" / "small" / "diagnostics.csv"));

  // env var picks the root when nothing else does
  CHECK(cli("run '" + good.string() + "'", "KBS_OUTPUT_DIR='" + (root / "env").string() + "'") == 0);
  CHECK(fs::exists(root / "env" / "small" / "manifest.json"));

  json bad = small_config();
  bad["extra"] = true;
  dump(root / "bad.json", bad);
  CHECK(cli("run '" + (root / "bad.json").string() + "' --out '" + root.string() + "'") == 3);
  CHECK(cli("run '" + (root / "missing.json").string() + "'") == 3);
  CHECK(cli("frobnicate") == 3);
  CHECK(cli("preset nope --out '" + (root / "p.json").string() + "'") == 3);

  json blow = small_config();
  blow["name"] = "blow";
  blow["model"]["b"] = {0.0, 0.0, 1.0};
  blow["initial_data"] = {{"type", "gaussian"}, {"amplitude", 40.0}, {"width", 1.0}};
  blow["evolve"] = {{"dt", 0.5}, {"t_end", 5.0}};
  dump(root / "blow.json", blow);
  CHECK(cli("run '" + (root / "blow.json").string() + "' --out '" + root.string() + "'") == 2);
  const json bm = json::parse(slurp(root / "blow" / "manifest.json"));
  CHECK(bm["status"] == "instability");
  CHECK(bm["event_time"].get<double>() > 0.0);

  CHECK(cli("preset kdv-soliton --out '" + (root / "ks.json").string() + "'") == 0);
  CHECK(parse_config(json::parse(slurp(root / "ks.json"))).name == "kdv-soliton");
  CHECK(cli("preset gwp-threshold --out '" + (root / "gwp").string() + "'") == 0);
  int n = 0;
  for (const auto& e : fs::directory_iterator(root / "gwp")) n += e.path().extension() == ".json";
  CHECK(n == 5);
  fs::remove_all(root);
}

TEST_CASE("sweep is independent of the worker count") {
  const fs::path root = scratch("sweep");
  fs::create_directories(root / "cfg");
  for (int i = 0; i < 4; ++i) {
    json j = small_config();
    j["name"] = "c" + std::to_string(i);
    j["seed"] = 100 + i;
    j["model"]["gamma"] = 0.25 * i;
    dump(root / "cfg" / ("c" + std::to_string(i) + ".json"), j);
  }
  CHECK(cli("sweep '" + (root / "cfg").string() + "' --workers 1 --out '" + (root / "w1").string() + "'") == 0);
  CHECK(cli("sweep '" + (root / "cfg").string() + "' --workers 2 --out '" + (root / "w2").string() + "'") == 0);
  const std::string t1 = slurp(root / "w1" / "sweep.csv");
  CHECK(t1 == slurp(root / "w2" / "sweep.csv"));
  CHECK(std::count(t1.begin(), t1.end(), '\n') == 5);
  for (const auto& e : fs::directory_iterator(root / "w1" / "runs")) {
    const std::string csv = slurp(e.path() / "diagnostics.csv");
    CHECK(!csv.empty());
    CHECK(csv == slurp(root / "w2" / "runs" / e.path().filename() / "diagnostics.csv"));
  }
  CHECK(cli("sweep '" + (root / "nothing").string() + "'") == 3);
  fs::remove_all(root);
}
