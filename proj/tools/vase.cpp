#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "vase/cli/config.hpp"
#include "vase/cli/experiment.hpp"
#include "vase/numkit/errors.hpp"

namespace {

using vase::cli::ExperimentConfig;

// --seed / --seeds override the config's seed battery
void apply_seed_flags(ExperimentConfig& cfg, const std::string& seeds_csv,
                      std::int64_t single_seed, int workers) {
  if (!seeds_csv.empty()) {
    cfg.seeds.clear();
    std::stringstream ss(seeds_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) cfg.seeds.push_back(std::stoull(item));
    }
  }
  if (single_seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(single_seed)};
  if (workers > 0) cfg.workers = workers;
  cfg.validate();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VASE surprise-driven exploration experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir, seeds_csv, heatmap_in, aggregate_out;
  std::vector<std::string> aggregate_in;
  std::int64_t single_seed = -1;
  int workers = 0;
  std::uint64_t step_cap = 300000;
  std::size_t bins = 64;
  std::vector<double> deltas{0.0, 1e-6, 1e-4, 1e-2, 1.0};
  std::string explore_mode;

  auto* train = app.add_subcommand("train", "run a (mode x seed) training battery");
  train->add_option("--config", config_path, "config file")->required();
  train->add_option("--out", out_dir, "output directory")->required();
  train->add_option("--seeds", seeds_csv, "comma-separated seed list");
  train->add_option("--seed", single_seed, "single seed (overrides --seeds)");
  train->add_option("--workers", workers, "parallel runs");

  auto* sweep = app.add_subcommand("sweep-delta", "VASE delta sweep on MountainCar");
  sweep->add_option("--config", config_path, "config file")->required();
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_option("--deltas", deltas, "delta values");
  sweep->add_option("--seeds", seeds_csv, "comma-separated seed list");
  sweep->add_option("--seed", single_seed, "single seed");
  sweep->add_option("--workers", workers, "parallel runs");

  auto* explore = app.add_subcommand("plane2d-explore",
                                     "train on plane2d until the first reward");
  explore->add_option("--config", config_path, "config file")->required();
  explore->add_option("--out", out_dir, "output directory")->required();
  explore->add_option("--step-cap", step_cap, "global step cap");
  explore->add_option("--mode", explore_mode, "restrict to one surprise mode");
  explore->add_option("--seeds", seeds_csv, "comma-separated seed list");
  explore->add_option("--seed", single_seed, "single seed");
  explore->add_option("--workers", workers, "parallel runs");

  auto* heatmap = app.add_subcommand("heatmap", "bin a trajectory dump into a grid");
  heatmap->add_option("--in", heatmap_in, "trajectory csv")->required();
  heatmap->add_option("--out", out_dir, "output prefix")->required();
  heatmap->add_option("--bins", bins, "grid resolution");

  auto* aggregate = app.add_subcommand("aggregate", "median/IQR across metrics files");
  aggregate->add_option("--in", aggregate_in, "metrics.csv files")->required();
  aggregate->add_option("--out", aggregate_out, "output csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return vase::cli::kExitConfig;
  }

  try {
    if (train->parsed()) {
      auto cfg = vase::cli::load_experiment_config(config_path);
      apply_seed_flags(cfg, seeds_csv, single_seed, workers);
      return vase::cli::run_experiment(cfg, out_dir);
    }
    if (sweep->parsed()) {
      auto cfg = vase::cli::load_experiment_config(config_path);
      apply_seed_flags(cfg, seeds_csv, single_seed, workers);
      return vase::cli::sweep_delta(cfg, deltas, out_dir);
    }
    if (explore->parsed()) {
      auto cfg = vase::cli::load_experiment_config(config_path);
      apply_seed_flags(cfg, seeds_csv, single_seed, workers);
      if (!explore_mode.empty()) {
        cfg.modes = {vase::surprise::parse_mode(explore_mode)};
      }
      return vase::cli::plane2d_explore(cfg, step_cap, out_dir);
    }
    if (heatmap->parsed()) {
      return vase::cli::emit_heatmap(heatmap_in, out_dir, bins);
    }
    if (aggregate->parsed()) {
      return vase::cli::aggregate_files(aggregate_in, aggregate_out);
    }
  } catch (const vase::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return vase::cli::kExitConfig;
  } catch (const vase::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return vase::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return vase::cli::kExitRunFailure;
  }
  return vase::cli::kExitConfig;
}
