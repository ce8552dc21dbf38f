#include "kbs/experiment.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "kbs/errors.hpp"
#include "kbs/initial_data.hpp"

namespace kbs {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string snapshot_text(const std::vector<double>& x, const std::vector<double>& u) {
  std::string out = "# x u\n";
  for (std::size_t k = 0; k < x.size(); ++k) out += num(x[k]) + " " + num(u[k]) + "\n";
  return out;
}

json model_json(const ModelParams& p) {
  json j = {{"N", p.N}, {"M", p.M()}, {"gamma", p.gamma}, {"a", p.a}, {"b", p.b},
            {"dispersion", p.dispersion_mode == DispersionMode::fractional ? "fractional" : "hilbert"}};
  if (p.dispersion_mode == DispersionMode::fractional) j["beta"] = p.beta;
  return j;
}

// Same fixed stage name for a given target, so a crashed run leaves a
// directory the next run simply replaces.
fs::path staging_path(const fs::path& target) {
  return target.parent_path() / ("." + target.filename().string() + ".staging");
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp" +
                                             std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path resolve_output_root(const ExperimentConfig& cfg, const fs::path& override_root) {
  if (!override_root.empty()) return override_root;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv(output_dir_env); env && *env) return env;
  return "kbs_out";
}

std::string series_csv(const DiagnosticSeries& series) {
  std::string out = "time";
  for (const auto& c : series.columns) out += "," + csv_escape(c);
  out += "\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out += num(series.times[i]);
    if (i < series.records.size())
      for (double v : series.records[i]) out += "," + num(v);
    out += "\n";
  }
  return out;
}

RunOutcome simulate(const ExperimentConfig& cfg) {
  RunOutcome res;
  GridPtr grid;
  SpectralField u0(make_grid(8.0, 8));
  EvolveConfig ev = cfg.evolve;
  try {
    cfg.model.validate();
    grid = make_grid(cfg.length, cfg.n);
    u0 = generate_initial_data(cfg.initial_data, grid, cfg.model, cfg.seed);
    if (cfg.auto_dt) ev.dt = std::min(ev.dt, suggest_dt(u0, cfg.model, cfg.safety));
    ev.validate();
  } catch (const InvalidArgument& e) {
    res.exit_code = exit_config;
    res.status = "config_error";
    res.message = e.what();
    return res;
  } catch (const ConfigError& e) {
    res.exit_code = exit_config;
    res.status = "config_error";
    res.message = e.what();
    return res;
  }
  res.dt = ev.dt;

  Trajectory traj;
  try {
    traj = evolve(u0, ev, cfg.model);
    res.series = collect(traj, cfg.diagnostics);
  } catch (const BoundaryContaminationError& e) {
    res.exit_code = exit_instability;
    res.status = "boundary_contamination";
    res.message = e.what();
    res.event_time = e.time();
    return res;
  } catch (const InstabilityError& e) {
    res.exit_code = exit_instability;
    res.status = "instability";
    res.message = e.what();
    res.event_time = e.time();
    return res;
  } catch (const InvalidArgument& e) {
    res.exit_code = exit_config;
    res.status = "config_error";
    res.message = e.what();
    return res;
  }

  res.nodes = grid->nodes();
  for (double t : cfg.snapshot_times) {
    const auto it = std::min_element(traj.times.begin(), traj.times.end(),
                                     [t](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
    const auto i = static_cast<std::size_t>(it - traj.times.begin());
    res.snapshots.emplace_back(traj.times[i], inverse_transform(traj.snapshots[i]));
  }
  return res;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const fs::path& override_root,
                          const std::string& dir_name) {
  RunOutcome res = simulate(cfg);
  const fs::path root = resolve_output_root(cfg, override_root);
  const fs::path target = root / (dir_name.empty() ? cfg.name : dir_name);
  const fs::path stage = staging_path(target);

  json files = json::array();
  fs::remove_all(stage);
  fs::create_directories(stage);
  if (res.series) {
    write_file_atomic(stage / "diagnostics.csv", series_csv(*res.series));
    files.push_back("diagnostics.csv");
  }
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%03zu.txt", i);
    write_file_atomic(stage / "snapshots" / name,
                      snapshot_text(res.nodes, res.snapshots[i].second));
    files.push_back(std::string("snapshots/") + name);
  }

  json manifest = {
      {"name", cfg.name},
      {"config_hash", config_hash(cfg)},
      {"exit_code", res.exit_code},
      {"status", res.status},
      {"message", res.message},
      {"grid", {{"length", cfg.length}, {"n", cfg.n}}},
      {"model", model_json(cfg.model)},
      {"seed", cfg.seed},
      {"dt", res.dt},
      {"t_end", cfg.evolve.t_end},
      {"versions", {{"kbs", std::string(version_string)}, {"fftw", std::string(fftw_version)}}},
      {"files", files},
      {"config", to_json(cfg)},
  };
  if (res.event_time >= 0.0) manifest["event_time"] = res.event_time;
  json snaps = json::array();
  for (std::size_t i = 0; i < res.snapshots.size(); ++i)
    snaps.push_back({{"file", files[i + (res.series ? 1 : 0)]}, {"time", res.snapshots[i].first}});
  manifest["snapshots"] = snaps;
  write_file_atomic(stage / "manifest.json", manifest.dump(2) + "\n");

  fs::remove_all(target);
  fs::rename(stage, target);
  res.directory = target;
  return res;
}

std::string sweep(const std::vector<ExperimentConfig>& configs, int workers,
                  const fs::path& root) {
  if (configs.empty()) throw InvalidArgument("sweep needs at least one config");
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  struct Row {
    std::string hash, name, status, message, finals;
    int exit_code = 0;
    double event_time = -1.0, dt = 0.0;
  };
  std::vector<Row> rows(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    // Runs are single-threaded; parallelism is across runs.
    omp_set_num_threads(1);
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      const auto& cfg = configs[i];
      Row& row = rows[i];
      row.hash = config_hash(cfg);
      row.name = cfg.name;
      try {
        const RunOutcome out = run_experiment(cfg, root / "runs", cfg.name + "-" + row.hash);
        row.exit_code = out.exit_code;
        row.status = out.status;
        row.message = out.message;
        row.event_time = out.event_time;
        row.dt = out.dt;
        if (out.series && !out.series->records.empty()) {
          for (std::size_t c = 0; c < out.series->columns.size(); ++c) {
            if (c) row.finals += ";";
            row.finals += out.series->columns[c] + "=" + num(out.series->final_value(c));
          }
        }
      } catch (const std::exception& e) {
        row.exit_code = 1;
        row.status = "error";
        row.message = e.what();
      }
    }
  };
  const auto nthreads = static_cast<std::size_t>(std::min<std::size_t>(workers, configs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.hash != b.hash ? a.hash < b.hash : a.name < b.name;
  });
  std::string out = "config_hash,name,exit_code,status,event_time,dt,final_values,message\n";
  for (const auto& r : rows) {
    out += r.hash + "," + csv_escape(r.name) + "," + std::to_string(r.exit_code) + "," +
           r.status + "," + (r.event_time >= 0.0 ? num(r.event_time) : "") + "," + num(r.dt) +
           "," + csv_escape(r.finals) + "," + csv_escape(r.message) + "\n";
  }
  write_file_atomic(root / "sweep.csv", out);
  return out;
}

}  // namespace kbs
