// kbs: run, sweep, check and preset verbs.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "kbs/errors.hpp"
#include "kbs/experiment.hpp"
#include "kbs/opcheck.hpp"

namespace fs = std::filesystem;

namespace {

void print_report(const kbs::OrderReport& r) {
  std::printf("%-44s %s  claimed %+.3f  measured %+.3f  (%s)\n", r.name.c_str(),
              r.pass ? "PASS" : "FAIL", r.claimed_order, r.measured_order, r.rule.c_str());
  for (const auto& [k, v] : r.samples) std::printf("    %10.4g  %.6e\n", k, v);
}

int do_run(const std::string& path, std::optional<long> seed, const std::string& out) {
  kbs::ExperimentConfig cfg;
  try {
    cfg = kbs::load_config(path);
  } catch (const kbs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kbs::exit_config;
  }
  if (seed) cfg.seed = static_cast<std::uint64_t>(*seed);
  const auto res = kbs::run_experiment(cfg, out);
  std::cout << cfg.name << ": " << res.status;
  if (!res.message.empty()) std::cout << " (" << res.message << ")";
  std::cout << "\n  output: " << res.directory.string() << "\n";
  if (res.series && !res.series->records.empty())
    for (std::size_t c = 0; c < res.series->columns.size(); ++c)
      std::printf("  %-48s %.10g\n", res.series->columns[c].c_str(), res.series->final_value(c));
  return res.exit_code;
}

int do_sweep(const std::string& dir, int workers, std::optional<long> seed,
             const std::string& out) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) {
    std::cerr << "config error: " << dir << " is not a directory\n";
    return kbs::exit_config;
  }
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "config error: no .json configs in " << dir << "\n";
    return kbs::exit_config;
  }
  std::vector<kbs::ExperimentConfig> configs;
  for (const auto& f : files) {
    try {
      configs.push_back(kbs::load_config(f));
    } catch (const kbs::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kbs::exit_config;
    }
    if (seed) configs.back().seed = static_cast<std::uint64_t>(*seed);
  }
  const fs::path root = out.empty() ? kbs::resolve_output_root(configs.front()) : fs::path(out);
  std::cout << kbs::sweep(configs, workers, root);
  std::cout << "aggregate: " << (root / "sweep.csv").string() << "\n";
  return kbs::exit_ok;
}

int do_preset(const std::string& name, const std::string& out) {
  std::vector<kbs::ExperimentConfig> configs;
  try {
    configs = kbs::make_preset(name);
  } catch (const kbs::ConfigError& e) {
    std::cerr << e.what() << "; available:";
    for (const auto& n : kbs::preset_names()) std::cerr << " " << n;
    std::cerr << "\n";
    return kbs::exit_config;
  }
  if (configs.size() == 1 && fs::path(out).extension() == ".json") {
    kbs::write_file_atomic(out, kbs::to_json(configs[0]).dump(2) + "\n");
    std::cout << out << "\n";
    return kbs::exit_ok;
  }
  // Several configs (or a directory target): one file per config.
  for (const auto& c : configs) {
    const fs::path p = fs::path(out) / (c.name + ".json");
    kbs::write_file_atomic(p, kbs::to_json(c).dump(2) + "\n");
    std::cout << p.string() << "\n";
  }
  return kbs::exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral experiments for KdV-Benjamin type equations"};
  app.require_subcommand(1);

  std::string config_path, out_dir, sweep_dir, preset_name, preset_out;
  std::optional<long> seed;
  int workers = 1;
  long check_seed = 1;

  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "Config JSON")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output root (default: config, then $KBS_OUTPUT_DIR)");

  auto* sw = app.add_subcommand("sweep", "Run every *.json config in a directory");
  sw->add_option("dir", sweep_dir, "Directory of configs")->required();
  sw->add_option("--workers", workers, "Parallel runs")->check(CLI::PositiveNumber);
  sw->add_option("--seed", seed, "Override every config seed");
  sw->add_option("--out", out_dir, "Output root");

  auto* check = app.add_subcommand("check", "Run the operator checks and print order reports");
  check->add_option("--seed", check_seed, "Master seed for randomized trials");

  auto* preset = app.add_subcommand("preset", "Write a catalog config");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_option("--out", preset_out, "Output file (.json) or directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kbs::exit_config;
  }

  try {
    if (*run) return do_run(config_path, seed, out_dir);
    if (*sw) return do_sweep(sweep_dir, workers, seed, out_dir);
    if (*preset) return do_preset(preset_name, preset_out);
    if (*check) {
      bool ok = true;
      for (const auto& r : kbs::run_opcheck_suite(static_cast<std::uint64_t>(check_seed))) {
        print_report(r);
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const kbs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kbs::exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
