#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vase/numkit/mlp.hpp"
#include "vase/numkit/rng.hpp"

namespace vase::policy {

// Diagonal-Gaussian policy: an MLP mean network plus a state-independent
// learned log-std per action dimension.
struct GaussianPolicy {
  numkit::MlpSpec spec;
  std::vector<double> params;
  std::vector<double> log_std;

  void validate() const;
  int obs_dim() const { return spec.input_dim(); }
  int action_dim() const { return spec.output_dim(); }

  // Joint parameter vector [mlp params..., log_std...] used by TRPO.
  std::vector<double> packed() const;
  void unpack(std::span<const double> packed);
};

GaussianPolicy init_policy(int obs_dim, int hidden, int action_dim,
                           numkit::Rng& rng, double init_std = 1.0);

std::vector<double> policy_mean(const GaussianPolicy& pol,
                                std::span<const double> obs);

// Diagonal-Gaussian log density of `action` at the given mean.
double log_prob(const GaussianPolicy& pol, std::span<const double> mean,
                std::span<const double> action);

// action = mean + std * eps; returns the action and its log density.
std::pair<std::vector<double>, double> sample_action(const GaussianPolicy& pol,
                                                     std::span<const double> obs,
                                                     numkit::Rng& rng);

}  // namespace vase::policy
