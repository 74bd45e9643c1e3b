#include "vase/cli/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vase/bnn/checkpoint.hpp"
#include "vase/cli/csv.hpp"
#include "vase/cli/heatmap.hpp"
#include "vase/ioutil.hpp"
#include "vase/numkit/errors.hpp"
#include "vase/policy/checkpoint.hpp"

namespace fs = std::filesystem;

namespace vase::cli {

double quantile(std::vector<double> xs, double p) {
  require(!xs.empty(), "quantile: empty sample");
  require(p >= 0.0 && p <= 1.0, "quantile: p must be in [0, 1]");
  std::sort(xs.begin(), xs.end());
  const double idx = p * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(idx));
  const auto hi = static_cast<std::size_t>(std::ceil(idx));
  const double frac = idx - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

namespace {

std::string fmt(double x) { return ioutil::format_csv(x); }

void write_metrics_csv(const std::string& path,
                       const std::vector<trainer::IterationMetrics>& iters) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "cannot open " + path);
  const std::vector<std::string> header{
      "iteration", "steps", "episodes", "avg_return_ext", "mean_surprise",
      "posterior_entropy", "policy_kl", "surrogate_improvement",
      "policy_step_accepted", "baseline_ev", "pool_size"};
  write_csv_row(os, header);
  for (const auto& m : iters) {
    const std::vector<std::string> row{
        std::to_string(m.iteration), std::to_string(m.steps),
        std::to_string(m.episodes), fmt(m.avg_return_ext), fmt(m.mean_surprise),
        fmt(m.posterior_entropy), fmt(m.policy_kl), fmt(m.surrogate_improvement),
        m.policy_step_accepted ? "1" : "0", fmt(m.baseline_ev),
        std::to_string(m.pool_size)};
    write_csv_row(os, row);
  }
}

// wall-clock phase timings; kept apart from the deterministic metrics
void write_timings_csv(const std::string& path,
                       const std::vector<trainer::IterationMetrics>& iters) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "cannot open " + path);
  const std::vector<std::string> header{"iteration", "t_collect", "t_model",
                                        "t_policy", "t_baseline"};
  write_csv_row(os, header);
  for (const auto& m : iters) {
    const std::vector<std::string> row{std::to_string(m.iteration), fmt(m.t_collect),
                                       fmt(m.t_model), fmt(m.t_policy),
                                       fmt(m.t_baseline)};
    write_csv_row(os, row);
  }
}

class TransitionDumper {
 public:
  TransitionDumper(const std::string& path, int state_dim, int action_dim)
      : os_(path, std::ios::binary) {
    require(os_.good(), "cannot open " + path);
    std::vector<std::string> header{"episode", "t"};
    for (int i = 0; i < state_dim; ++i) header.push_back("raw_obs_" + std::to_string(i));
    for (int i = 0; i < state_dim; ++i) header.push_back("norm_obs_" + std::to_string(i));
    for (int i = 0; i < action_dim; ++i) header.push_back("action_" + std::to_string(i));
    header.insert(header.end(), {"r_ext", "r_int", "done"});
    write_csv_row(os_, header);
  }

  void operator()(const trainer::StepRecord& rec) {
    std::vector<std::string> row{std::to_string(rec.episode), std::to_string(rec.t)};
    for (double v : rec.raw_obs) row.push_back(fmt(v));
    for (double v : rec.norm_obs) row.push_back(fmt(v));
    for (double v : rec.action) row.push_back(fmt(v));
    row.push_back(fmt(rec.r_ext));
    row.push_back(fmt(rec.r_int));
    row.push_back(rec.done ? "1" : "0");
    write_csv_row(os_, row);
  }

 private:
  std::ofstream os_;
};

trainer::TrainConfig run_config(const ExperimentConfig& cfg,
                                surprise::SurpriseMode mode, std::uint64_t seed) {
  trainer::TrainConfig out = cfg.base;
  out.surprise.mode = mode;
  out.seed = seed;
  return out;
}

void snapshot_run(const std::string& path, const ExperimentConfig& cfg,
                  surprise::SurpriseMode mode, std::uint64_t seed) {
  ExperimentConfig single = cfg;
  single.base = run_config(cfg, mode, seed);
  single.modes = {mode};
  single.seeds = {seed};
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "cannot open " + path);
  write_config_snapshot(os, single);
}

std::string mode_dir_name(surprise::SurpriseMode mode) {
  return surprise::mode_name(mode);
}

struct RunSpec {
  surprise::SurpriseMode mode;
  std::uint64_t seed;
  std::string dir;
};

// (mode, seed) runs are independent; they execute in parallel up to the
// configured worker count and each writes only its own directory.
std::vector<RunResult> execute_battery(const ExperimentConfig& cfg,
                                       const std::vector<RunSpec>& specs) {
  std::vector<RunResult> results(specs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.workers)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(specs.size()); ++i) {
    results[i] = execute_run(cfg, specs[i].mode, specs[i].seed, specs[i].dir);
  }
  return results;
}

int aggregate_mode(const std::vector<const RunResult*>& runs,
                   std::size_t seed_count, const std::string& out_path) {
  std::vector<const RunResult*> survivors;
  for (const auto* r : runs) {
    if (r->ok) {
      survivors.push_back(r);
    } else {
      std::cerr << "warning: run (mode " << surprise::mode_name(r->mode) << ", seed "
                << r->seed << ") failed and is excluded: " << r->error << '\n';
    }
  }
  if (survivors.empty()) return kExitRunFailure;
  const std::size_t required = std::min<std::size_t>(3, seed_count);
  if (survivors.size() < required) return kExitAggregation;

  std::size_t n_iters = survivors.front()->iterations.size();
  for (const auto* r : survivors) n_iters = std::min(n_iters, r->iterations.size());

  std::ofstream os(out_path, std::ios::binary);
  require(os.good(), "cannot open " + out_path);
  const std::vector<std::string> header{"iteration", "median", "q25", "q75"};
  write_csv_row(os, header);
  for (std::size_t i = 0; i < n_iters; ++i) {
    std::vector<double> values;
    values.reserve(survivors.size());
    for (const auto* r : survivors) values.push_back(r->iterations[i].avg_return_ext);
    const std::vector<std::string> row{
        std::to_string(i), fmt(quantile(values, 0.5)), fmt(quantile(values, 0.25)),
        fmt(quantile(values, 0.75))};
    write_csv_row(os, row);
  }
  return kExitOk;
}

}  // namespace

RunResult execute_run(const ExperimentConfig& cfg, surprise::SurpriseMode mode,
                      std::uint64_t seed, const std::string& dir) {
  RunResult result;
  result.mode = mode;
  result.seed = seed;
  try {
    fs::create_directories(dir);
    snapshot_run(dir + "/config.snapshot", cfg, mode, seed);

    trainer::Trainer tr(run_config(cfg, mode, seed));
    std::unique_ptr<TransitionDumper> dumper;
    trainer::StepObserver observer;
    if (cfg.base.dump_transitions) {
      const auto probe = envs::make_env(cfg.base.env, cfg.base.horizon);
      const auto spec = probe->spec();
      dumper = std::make_unique<TransitionDumper>(dir + "/transitions.csv",
                                                  spec.state_dim, spec.action_dim);
      observer = [&](const trainer::StepRecord& rec) { (*dumper)(rec); };
    }
    const auto artifact = tr.run(observer ? &observer : nullptr);

    write_metrics_csv(dir + "/metrics.csv", artifact.iterations);
    write_timings_csv(dir + "/timings.csv", artifact.iterations);
    bnn::save_posterior_file(dir + "/posterior.ckpt", tr.posterior(),
                             cfg.base.model.prior, cfg.base.surprise.lik);
    policy::save_policy_file(dir + "/policy.ckpt", tr.policy());
    policy::save_value_net_file(dir + "/value.ckpt", tr.value_net());

    if (!artifact.complete) {
      std::ofstream marker(dir + "/INCOMPLETE");
      marker << artifact.abort_reason << '\n';
      result.ok = false;
      result.error = artifact.abort_reason;
    } else {
      result.ok = true;
    }
    result.iterations = artifact.iterations;
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
  }
  return result;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  {
    std::ofstream os(out_dir + "/config.snapshot", std::ios::binary);
    require(os.good(), "cannot open config snapshot");
    write_config_snapshot(os, cfg);
  }

  std::vector<RunSpec> specs;
  for (const auto mode : cfg.modes) {
    for (const auto seed : cfg.seeds) {
      specs.push_back({mode, seed,
                       out_dir + "/" + mode_dir_name(mode) + "/seed_" +
                           std::to_string(seed)});
    }
  }
  const auto results = execute_battery(cfg, specs);

  int exit_code = kExitOk;
  for (const auto mode : cfg.modes) {
    std::vector<const RunResult*> mode_runs;
    for (const auto& r : results) {
      if (r.mode == mode) mode_runs.push_back(&r);
    }
    const int code = aggregate_mode(mode_runs, cfg.seeds.size(),
                                    out_dir + "/" + mode_dir_name(mode) +
                                        "/aggregate.csv");
    exit_code = std::max(exit_code, code);
  }
  return exit_code;
}

int sweep_delta(const ExperimentConfig& cfg, const std::vector<double>& deltas,
                const std::string& out_dir) {
  if (cfg.base.env != envs::EnvId::kMountainCar) {
    throw ConfigError("sweep-delta: env.id must be mountaincar");
  }
  require(!deltas.empty(), "sweep-delta: no delta values");
  fs::create_directories(out_dir);

  struct DeltaCurve {
    double delta;
    std::vector<double> mean_return;  // per iteration over surviving seeds
    std::size_t survivors = 0;
  };
  std::vector<DeltaCurve> curves;
  int exit_code = kExitOk;

  for (const double delta : deltas) {
    ExperimentConfig dcfg = cfg;
    dcfg.base.surprise.mode = surprise::SurpriseMode::kVase;
    dcfg.base.surprise.delta = delta;
    dcfg.modes = {surprise::SurpriseMode::kVase};

    char label[32];
    std::snprintf(label, sizeof(label), "%g", delta);
    std::vector<RunSpec> specs;
    for (const auto seed : dcfg.seeds) {
      specs.push_back({surprise::SurpriseMode::kVase, seed,
                       out_dir + "/delta_" + label + "/seed_" + std::to_string(seed)});
    }
    const auto results = execute_battery(dcfg, specs);

    DeltaCurve curve;
    curve.delta = delta;
    std::size_t n_iters = 0;
    for (const auto& r : results) {
      if (!r.ok) {
        std::cerr << "warning: delta " << label << " seed " << r.seed
                  << " failed: " << r.error << '\n';
        continue;
      }
      ++curve.survivors;
      n_iters = n_iters == 0 ? r.iterations.size()
                             : std::min(n_iters, r.iterations.size());
    }
    if (curve.survivors == 0) {
      exit_code = std::max(exit_code, kExitRunFailure);
    } else {
      if (curve.survivors < std::min<std::size_t>(3, dcfg.seeds.size())) {
        exit_code = std::max(exit_code, kExitAggregation);
      }
      curve.mean_return.assign(n_iters, 0.0);
      for (const auto& r : results) {
        if (!r.ok) continue;
        for (std::size_t i = 0; i < n_iters; ++i) {
          curve.mean_return[i] += r.iterations[i].avg_return_ext;
        }
      }
      for (auto& v : curve.mean_return) v /= static_cast<double>(curve.survivors);
    }
    curves.push_back(std::move(curve));
  }

  std::size_t n_iters = SIZE_MAX;
  for (const auto& c : curves) {
    if (!c.mean_return.empty()) n_iters = std::min(n_iters, c.mean_return.size());
  }
  if (n_iters == SIZE_MAX) n_iters = 0;

  std::ofstream os(out_dir + "/sweep.csv", std::ios::binary);
  require(os.good(), "cannot open sweep.csv");
  std::vector<std::string> header{"iteration"};
  for (const auto& c : curves) {
    char label[32];
    std::snprintf(label, sizeof(label), "%g", c.delta);
    header.push_back(std::string("mean_d") + label);
  }
  write_csv_row(os, header);
  for (std::size_t i = 0; i < n_iters; ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (const auto& c : curves) {
      row.push_back(c.mean_return.empty() ? "" : fmt(c.mean_return[i]));
    }
    write_csv_row(os, row);
  }
  return exit_code;
}

int plane2d_explore(const ExperimentConfig& cfg, std::uint64_t step_cap,
                    const std::string& out_dir) {
  if (cfg.base.env != envs::EnvId::kPlane2d) {
    throw ConfigError("plane2d-explore: env.id must be plane2d");
  }
  require(step_cap >= 1, "plane2d-explore: step cap must be >= 1");
  fs::create_directories(out_dir);

  struct ExploreRow {
    surprise::SurpriseMode mode;
    std::uint64_t seed;
    bool found = false;
    std::uint64_t steps = 0;
    std::string error;
  };
  std::vector<std::pair<surprise::SurpriseMode, std::uint64_t>> specs;
  for (const auto mode : cfg.modes) {
    for (const auto seed : cfg.seeds) specs.push_back({mode, seed});
  }
  std::vector<ExploreRow> rows(specs.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.workers)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(specs.size()); ++i) {
    const auto [mode, seed] = specs[i];
    ExploreRow row;
    row.mode = mode;
    row.seed = seed;
    try {
      const std::string traj_path = out_dir + "/traj_" + mode_dir_name(mode) +
                                    "_seed_" + std::to_string(seed) + ".csv";
      TransitionDumper dumper(traj_path, 2, 2);
      trainer::StepObserver observer = [&](const trainer::StepRecord& rec) {
        dumper(rec);
      };
      trainer::Trainer tr(run_config(cfg, mode, seed));
      const auto result = tr.explore_until_reward(step_cap, &observer);
      row.found = result.found;
      row.steps = result.steps;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows[i] = row;
  }

  std::ofstream os(out_dir + "/explore.csv", std::ios::binary);
  require(os.good(), "cannot open explore.csv");
  const std::vector<std::string> header{"mode", "seed", "steps", "capped"};
  write_csv_row(os, header);
  int exit_code = kExitOk;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "warning: explore run failed: " << row.error << '\n';
      exit_code = kExitRunFailure;
      continue;
    }
    const std::vector<std::string> cells{
        surprise::mode_name(row.mode), std::to_string(row.seed),
        std::to_string(row.steps), row.found ? "0" : "1"};
    write_csv_row(os, cells);
  }
  return exit_code;
}

int emit_heatmap(const std::string& trajectory_csv, const std::string& out_prefix,
                 std::size_t bins) {
  const auto table = read_csv_file(trajectory_csv);
  const int cx = table.column("raw_obs_0");
  const int cy = table.column("raw_obs_1");
  require(cx >= 0 && cy >= 0, "heatmap: trajectory csv lacks raw_obs_0/raw_obs_1");
  std::vector<double> xs, ys;
  xs.reserve(table.rows.size());
  ys.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    xs.push_back(std::stod(row[cx]));
    ys.push_back(std::stod(row[cy]));
  }
  const auto grid = bin_trajectory(xs, ys, bins, bins, 2.5);
  {
    std::ofstream os(out_prefix + ".csv", std::ios::binary);
    require(os.good(), "cannot open " + out_prefix + ".csv");
    write_grid_csv(os, grid);
  }
  {
    std::ofstream os(out_prefix + ".pgm", std::ios::binary);
    require(os.good(), "cannot open " + out_prefix + ".pgm");
    write_grid_pgm(os, grid);
  }
  return kExitOk;
}

int aggregate_files(const std::vector<std::string>& metrics_files,
                    const std::string& out_path) {
  require(!metrics_files.empty(), "aggregate: no input files");
  std::vector<std::vector<double>> curves;
  for (const auto& path : metrics_files) {
    const auto table = read_csv_file(path);
    const int col = table.column("avg_return_ext");
    require(col >= 0, "aggregate: " + path + " lacks avg_return_ext");
    std::vector<double> curve;
    curve.reserve(table.rows.size());
    for (const auto& row : table.rows) curve.push_back(std::stod(row[col]));
    curves.push_back(std::move(curve));
  }
  std::size_t n_iters = SIZE_MAX;
  for (const auto& c : curves) n_iters = std::min(n_iters, c.size());
  if (n_iters == SIZE_MAX) n_iters = 0;

  std::ofstream os(out_path, std::ios::binary);
  require(os.good(), "cannot open " + out_path);
  const std::vector<std::string> header{"iteration", "median", "q25", "q75"};
  write_csv_row(os, header);
  for (std::size_t i = 0; i < n_iters; ++i) {
    std::vector<double> values;
    for (const auto& c : curves) values.push_back(c[i]);
    const std::vector<std::string> row{
        std::to_string(i), fmt(quantile(values, 0.5)), fmt(quantile(values, 0.25)),
        fmt(quantile(values, 0.75))};
    write_csv_row(os, row);
  }
  return kExitOk;
}

}  // namespace vase::cli
