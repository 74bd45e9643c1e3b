#include "vase/policy/gae.hpp"

#include <cmath>

#include "vase/numkit/errors.hpp"

namespace vase::policy {

void TrajectoryBatch::validate() const {
  const std::size_t n = rewards.size();
  require(n >= 1, "TrajectoryBatch: empty batch");
  check_length("TrajectoryBatch observations", observations.size(), n * obs_dim);
  check_length("TrajectoryBatch actions", actions.size(), n * action_dim);
  check_length("TrajectoryBatch log_probs", log_probs.size(), n);
  require(!episode_starts.empty() && episode_starts.front() == 0,
          "TrajectoryBatch: episode boundaries must start at 0");
  for (std::size_t i = 1; i < episode_starts.size(); ++i) {
    require(episode_starts[i] > episode_starts[i - 1] && episode_starts[i] < n,
            "TrajectoryBatch: episode boundaries must be increasing");
  }
}

void normalize_in_place(std::vector<double>& xs) {
  if (xs.empty()) return;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  const double sd = std::sqrt(var);
  for (double& x : xs) {
    x -= mean;
    if (sd >= 1e-8) x /= sd;
  }
}

void compute_advantages(TrajectoryBatch& batch, double gamma, double gae_lambda) {
  batch.validate();
  check_length("compute_advantages values", batch.values.size(), batch.size());
  const std::size_t n = batch.size();
  batch.advantages.assign(n, 0.0);
  batch.returns.assign(n, 0.0);

  const std::size_t n_eps = batch.episode_starts.size();
  for (std::size_t e = 0; e < n_eps; ++e) {
    const std::size_t lo = batch.episode_starts[e];
    const std::size_t hi = (e + 1 < n_eps) ? batch.episode_starts[e + 1] : n;
    double adv = 0.0;
    double ret = 0.0;
    for (std::size_t t = hi; t-- > lo;) {
      const double next_value = (t + 1 < hi) ? batch.values[t + 1] : 0.0;
      const double delta = batch.rewards[t] + gamma * next_value - batch.values[t];
      adv = delta + gamma * gae_lambda * adv;
      ret = batch.rewards[t] + gamma * ret;
      batch.advantages[t] = adv;
      batch.returns[t] = ret;
    }
  }
  normalize_in_place(batch.advantages);
  ensure_finite(batch.advantages, "compute_advantages");
}

}  // namespace vase::policy
