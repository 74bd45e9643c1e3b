#pragma once

#include <vector>

namespace vase::policy {

// Flat rollout storage; episode i spans
// [episode_starts[i], episode_starts[i+1]) (the last one runs to size()).
struct TrajectoryBatch {
  std::size_t obs_dim = 0;
  std::size_t action_dim = 0;
  std::vector<double> observations;  // what the policy saw (normalized)
  std::vector<double> actions;       // raw Gaussian samples (pre-clip)
  std::vector<double> rewards;       // mixed r = r_e + eta * u
  std::vector<double> rewards_ext;   // extrinsic only, for reporting
  std::vector<double> log_probs;
  std::vector<std::size_t> episode_starts;
  std::vector<double> values;      // baseline predictions
  std::vector<double> advantages;  // filled by compute_advantages
  std::vector<double> returns;     // discounted reward-to-go targets

  std::size_t size() const { return rewards.size(); }
  void validate() const;
};

// GAE(gamma, lambda) per episode segment with batch-level advantage
// normalization. Segment ends are treated as terminal (finite-horizon
// formulation: no bootstrap past the last step of a segment).
void compute_advantages(TrajectoryBatch& batch, double gamma, double gae_lambda);

// zero mean, unit std unless the spread is degenerate (std < 1e-8)
void normalize_in_place(std::vector<double>& xs);

}  // namespace vase::policy
