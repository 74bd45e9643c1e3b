#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vase/bnn/elbo.hpp"
#include "vase/bnn/posterior.hpp"
#include "vase/envs/env.hpp"
#include "vase/envs/normalizer.hpp"
#include "vase/policy/baseline.hpp"
#include "vase/policy/gaussian_policy.hpp"
#include "vase/policy/trpo.hpp"
#include "vase/surprise/surprise.hpp"
#include "vase/trainer/replay_pool.hpp"

namespace vase::trainer {

struct ModelConfig {
  int hidden = 32;
  numkit::Activation activation = numkit::Activation::kRelu;
  double lr = 1e-3;
  std::size_t minibatch = 32;
  int steps_per_iteration = 500;
  bnn::PriorSpec prior{0.5};
};

struct PolicyConfig {
  int hidden = 32;  // tanh hidden layer
  double init_std = 1.0;
};

struct BaselineConfig {
  int hidden = 32;  // relu hidden layer
  double lr = 0.01;
  int steps = 200;
};

struct TrainConfig {
  envs::EnvId env = envs::EnvId::kMountainCar;
  int horizon = 500;
  int normalize_override = -1;  // -1 per-task default, 0 off, 1 on
  int n_iterations = 100;
  int batch_steps = 1000;
  std::uint64_t seed = 0;
  surprise::SurpriseConfig surprise{};
  ModelConfig model{};
  PolicyConfig policy{};
  BaselineConfig baseline{};
  policy::TrpoConfig trpo{};
  std::size_t pool_capacity = 100000;
  std::size_t pool_min_size = 500;
  bool dump_transitions = false;
  // plane2d goal placement (the goal tolerance is a convention of this
  // implementation and is recorded in the config snapshot)
  double plane2d_goal_x = 1.0;
  double plane2d_goal_y = 1.0;
  double plane2d_goal_radius = 0.05;

  void validate() const;
};

struct IterationMetrics {
  int iteration = 0;
  int steps = 0;
  int episodes = 0;
  double avg_return_ext = 0.0;  // E[sum r_e] per episode, intrinsic excluded
  double mean_surprise = 0.0;
  double posterior_entropy = 0.0;
  double policy_kl = 0.0;
  double surrogate_improvement = 0.0;
  bool policy_step_accepted = false;
  double baseline_ev = 0.0;
  std::size_t pool_size = 0;
  // wall-clock seconds per phase; reported separately from the
  // deterministic metrics
  double t_collect = 0.0;
  double t_model = 0.0;
  double t_policy = 0.0;
  double t_baseline = 0.0;
};

// One row per environment step, for trajectory dumps and heatmaps.
struct StepRecord {
  int episode = 0;
  int t = 0;
  std::vector<double> raw_obs;
  std::vector<double> norm_obs;
  std::vector<double> action;  // environment-space action
  double r_ext = 0.0;
  double r_int = 0.0;
  bool done = false;
};

using StepObserver = std::function<void(const StepRecord&)>;

struct RunArtifact {
  std::vector<IterationMetrics> iterations;
  bool complete = true;
  std::string abort_reason;
};

// Algorithm owner: alternates rollout collection with intrinsic rewards,
// dynamics-model updates on the replay pool, a TRPO policy step and a
// baseline refit.
class Trainer {
 public:
  explicit Trainer(TrainConfig cfg);

  RunArtifact run(const StepObserver* observer = nullptr);

  struct ExploreResult {
    bool found = false;
    std::uint64_t steps = 0;  // 1-based global step index of the first reward
  };

  // Trains as usual but stops at the first extrinsic reward or at step_cap.
  ExploreResult explore_until_reward(std::uint64_t step_cap,
                                     const StepObserver* observer = nullptr);

  const policy::GaussianPolicy& policy() const { return policy_; }
  const bnn::VariationalPosterior& posterior() const { return posterior_; }
  const policy::ValueNet& value_net() const { return value_net_; }
  const TrainConfig& config() const { return cfg_; }

 private:
  struct CollectResult {
    policy::TrajectoryBatch batch;
    std::vector<double> surprises;
    int episodes = 0;
    bool reward_found = false;
    std::uint64_t reward_step = 0;
    bool capped = false;
  };

  CollectResult collect_batch(const StepObserver* observer, bool stop_on_reward,
                              std::uint64_t step_cap);
  void update_model();
  IterationMetrics train_iteration(int iteration, const StepObserver* observer);

  std::vector<double> to_env_action(const std::vector<double>& policy_action) const;

  TrainConfig cfg_;
  std::unique_ptr<envs::Env> env_;
  bool normalize_obs_ = false;
  envs::ObsNormalizer normalizer_;
  bnn::VariationalPosterior posterior_;
  numkit::AdamMoments model_moments_;
  long model_step_count_ = 0;
  policy::GaussianPolicy policy_;
  policy::ValueNet value_net_;
  ReplayPool pool_;
  surprise::BayesScoreSettings bayes_settings_;
  std::deque<double> surprise_medians_;  // for optional median normalization

  numkit::Rng env_rng_;
  numkit::Rng policy_rng_;
  numkit::Rng surprise_root_;
  numkit::Rng model_rng_;

  std::uint64_t global_step_ = 0;
  int episode_count_ = 0;
};

}  // namespace vase::trainer
