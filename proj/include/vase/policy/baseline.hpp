#pragma once

#include <vector>

#include "vase/numkit/mlp.hpp"
#include "vase/numkit/rng.hpp"
#include "vase/policy/gae.hpp"

namespace vase::policy {

// State-value regressor used as the GAE baseline.
struct ValueNet {
  numkit::MlpSpec spec;
  std::vector<double> params;
};

// input_dim is typically obs_dim + 1: the value input carries the in-episode
// time fraction so finite-horizon reward-to-go is representable.
ValueNet init_value_net(int input_dim, int hidden, numkit::Rng& rng);

std::vector<double> predict_values(const ValueNet& net,
                                   const std::vector<double>& inputs,
                                   std::size_t n);

struct BaselineFit {
  double explained_variance_before = 0.0;
  double explained_variance_after = 0.0;
  double final_loss = 0.0;
};

// Full-batch Adam on squared error for a fixed number of steps.
BaselineFit fit_baseline(ValueNet& net, const std::vector<double>& inputs,
                         std::size_t n, const std::vector<double>& targets,
                         double lr, int steps);

// 1 - Var(residual) / Var(target); 1 when targets are matched exactly.
double explained_variance(const std::vector<double>& predictions,
                          const std::vector<double>& targets);

}  // namespace vase::policy
