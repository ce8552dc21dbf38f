#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kbs/diagnostics.hpp"
#include "kbs/evolution.hpp"
#include "kbs/model.hpp"

namespace kbs {

struct SolitonSpec {
  double speed = 4.0;  ///< c = 4 kappa^2
  double center = -2.0;
  std::optional<double> b;  ///< must match the model's b_1 when given
};

struct GaussianSpec {
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
};

/// Coefficients amplitude sqrt(2 pi / L) <xi>^{-s-1/2-delta} e^{i theta(xi)}.
/// envelope_width > 0 multiplies the field by exp(-((x - center)/width)^2)
/// so the rough data is localized in a large box.
struct RandomHsSpec {
  double s = 1.6;
  double delta = 0.05;
  double amplitude = 1.0;
  double envelope_width = 0.0;
  double center = 0.0;
  std::optional<std::uint64_t> seed;  ///< defaults to the config seed
};

/// Rough field cut off smoothly to x <= x0 - gap (it vanishes for x >= x0),
/// plus a smooth bump to the right of x0.
struct SplitSpec {
  RandomHsSpec rough;
  GaussianSpec smooth_right;
  double x0 = 0.0;
  double gap = 1.0;
};

using InitialDataSpec = std::variant<SolitonSpec, GaussianSpec, RandomHsSpec, SplitSpec>;

struct ExperimentConfig {
  std::string name = "run";
  ModelParams model;
  double length = 40.0;
  std::size_t n = 256;
  EvolveConfig evolve;
  bool auto_dt = false;  ///< dt = min(dt_max, suggest_dt(u0, safety))
  double safety = 0.5;
  InitialDataSpec initial_data = GaussianSpec{};
  std::vector<FunctionalSpec> diagnostics;
  std::vector<double> snapshot_times;  ///< snapshots written nearest these
  std::uint64_t seed = 0;
  std::string output_dir;  ///< empty: KBS_OUTPUT_DIR or ./kbs_out
};

/// Strict parse; unknown keys and out-of-range values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);
/// FNV-1a of the canonical JSON dump, 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace kbs
