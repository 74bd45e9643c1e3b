#include "vase/policy/gaussian_policy.hpp"

#include <cmath>
#include <numbers>

#include "vase/numkit/errors.hpp"

namespace vase::policy {

void GaussianPolicy::validate() const {
  spec.validate();
  check_length("GaussianPolicy params", params.size(),
                static_cast<std::size_t>(spec.param_count()));
  check_length("GaussianPolicy log_std", log_std.size(),
                static_cast<std::size_t>(spec.output_dim()));
  ensure_finite(log_std, "GaussianPolicy log_std");
}

std::vector<double> GaussianPolicy::packed() const {
  std::vector<double> out(params);
  out.insert(out.end(), log_std.begin(), log_std.end());
  return out;
}

void GaussianPolicy::unpack(std::span<const double> packed) {
  check_length("GaussianPolicy::unpack", packed.size(),
                params.size() + log_std.size());
  std::copy(packed.begin(), packed.begin() + params.size(), params.begin());
  std::copy(packed.begin() + params.size(), packed.end(), log_std.begin());
}

GaussianPolicy init_policy(int obs_dim, int hidden, int action_dim,
                           numkit::Rng& rng, double init_std) {
  require(init_std > 0.0, "init_policy: init_std must be positive");
  GaussianPolicy pol;
  pol.spec.layers = {obs_dim, hidden, action_dim};
  pol.spec.hidden = numkit::Activation::kTanh;
  // small output scale keeps the initial mean near zero; exploration comes
  // from the stochastic std
  pol.params = numkit::mlp_init_params(pol.spec, rng, 0.01);
  pol.log_std.assign(action_dim, std::log(init_std));
  return pol;
}

std::vector<double> policy_mean(const GaussianPolicy& pol,
                                std::span<const double> obs) {
  return numkit::mlp_forward(pol.spec, pol.params, obs);
}

double log_prob(const GaussianPolicy& pol, std::span<const double> mean,
                std::span<const double> action) {
  check_length("log_prob action", action.size(), mean.size());
  double lp = 0.0;
  for (std::size_t j = 0; j < mean.size(); ++j) {
    const double ls = pol.log_std[j];
    const double z = (action[j] - mean[j]) * std::exp(-ls);
    lp += -0.5 * z * z - ls - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  return lp;
}

std::pair<std::vector<double>, double> sample_action(const GaussianPolicy& pol,
                                                     std::span<const double> obs,
                                                     numkit::Rng& rng) {
  const auto mean = policy_mean(pol, obs);
  std::vector<double> action(mean.size());
  for (std::size_t j = 0; j < mean.size(); ++j) {
    action[j] = mean[j] + std::exp(pol.log_std[j]) * rng.normal();
  }
  const double lp = log_prob(pol, mean, action);
  ensure_finite(action, "sample_action");
  return {action, lp};
}

}  // namespace vase::policy
