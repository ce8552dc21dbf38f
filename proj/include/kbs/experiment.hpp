#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kbs/config.hpp"
#include "kbs/diagnostics.hpp"

namespace kbs {

inline constexpr const char* version_string = "1.0.0";
inline constexpr const char* output_dir_env = "KBS_OUTPUT_DIR";

enum ExitCode : int { exit_ok = 0, exit_instability = 2, exit_config = 3 };

struct RunOutcome {
  int exit_code = exit_ok;
  std::string status = "ok";  ///< ok | instability | boundary_contamination | config_error
  std::string message;
  std::filesystem::path directory;  ///< final run directory (empty if nothing written)
  std::optional<DiagnosticSeries> series;
  double dt = 0.0;
  double event_time = -1.0;  ///< failure time for instability/contamination
  std::vector<double> nodes;
  /// (time, samples) for each requested snapshot time
  std::vector<std::pair<double, std::vector<double>>> snapshots;
};

/// Output root: explicit argument, else the config's output_dir, else the
/// KBS_OUTPUT_DIR environment variable, else ./kbs_out.
std::filesystem::path resolve_output_root(const ExperimentConfig& cfg,
                                          const std::filesystem::path& override_root = {});

/// CSV text of a series: header "time,<labels>", values printed with 17
/// significant digits.
std::string series_csv(const DiagnosticSeries& series);

/// Runs one experiment and writes <root>/<dir_name>/ with diagnostics.csv,
/// manifest.json and snapshots/. Everything is written into a staging
/// directory first and renamed into place. dir_name defaults to cfg.name.
RunOutcome run_experiment(const ExperimentConfig& cfg,
                          const std::filesystem::path& override_root = {},
                          const std::string& dir_name = {});

/// In-memory part of run_experiment (no files).
RunOutcome simulate(const ExperimentConfig& cfg);

/// Runs every config with `workers` threads. Runs land in
/// <root>/runs/<name>-<hash>/ and the aggregate table, one row per config
/// sorted by config hash, in <root>/sweep.csv. Returns the table text.
std::string sweep(const std::vector<ExperimentConfig>& configs, int workers,
                  const std::filesystem::path& root);

std::vector<std::string> preset_names();
/// Catalog configs; most presets yield one config, gwp-threshold yields one
/// per nonlinearity degree M = 1 .. 5.
std::vector<ExperimentConfig> make_preset(const std::string& name);

/// Writes text to path through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace kbs
