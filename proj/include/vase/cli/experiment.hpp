#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vase/cli/config.hpp"
#include "vase/trainer/trainer.hpp"

namespace vase::cli {

// process exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRunFailure = 3;
inline constexpr int kExitAggregation = 4;

// Inclusive linear interpolation quantile (sorted copy taken internally).
double quantile(std::vector<double> xs, double p);

struct RunResult {
  surprise::SurpriseMode mode = surprise::SurpriseMode::kNone;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<trainer::IterationMetrics> iterations;
};

// One training run persisted into `dir`: config snapshot, metrics.csv,
// timings.csv (wall clock, excluded from determinism guarantees),
// checkpoints, optional transitions.csv.
RunResult execute_run(const ExperimentConfig& cfg, surprise::SurpriseMode mode,
                      std::uint64_t seed, const std::string& dir);

// One run per (mode, seed); per-mode median and interquartile aggregation of
// the average extrinsic return.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// VASE batteries across delta values on MountainCar; emits one mean curve
// column group per delta.
int sweep_delta(const ExperimentConfig& cfg, const std::vector<double>& deltas,
                const std::string& out_dir);

// Trains on plane2d until the first extrinsic reward (or step cap), dumping
// the visitation trajectory per run and a summary CSV.
int plane2d_explore(const ExperimentConfig& cfg, std::uint64_t step_cap,
                    const std::string& out_dir);

// Bins a trajectory dump into an HxW grid, writing <out_prefix>.csv and
// <out_prefix>.pgm.
int emit_heatmap(const std::string& trajectory_csv, const std::string& out_prefix,
                 std::size_t bins);

// Median/quartile aggregation of explicit per-run metrics files.
int aggregate_files(const std::vector<std::string>& metrics_files,
                    const std::string& out_path);

}  // namespace vase::cli
