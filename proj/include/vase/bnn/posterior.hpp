#pragma once

#include <span>
#include <vector>

#include "vase/numkit/mlp.hpp"
#include "vase/numkit/rng.hpp"

namespace vase::bnn {

// Zero-mean Gaussian prior over every network weight, one shared std dev.
struct PriorSpec {
  double sigma_m = 0.5;
  void validate() const;
};

// Gaussian state likelihood. The default form uses a single scalar
// normalizer over the norm of the difference vector; per_dimension switches
// to a diagonal Gaussian with one normalizer per output coordinate.
struct LikelihoodSpec {
  double sigma_c = 5.0;
  bool per_dimension = false;
  void validate() const;
};

// Fully factorised Gaussian over the dynamics-model weights. sigma is
// parameterised as softplus(rho) so it stays strictly positive.
struct VariationalPosterior {
  numkit::MlpSpec spec;
  std::vector<double> mu;
  std::vector<double> rho;

  void validate() const;
  std::size_t size() const { return mu.size(); }
  std::vector<double> sigma() const;
};

struct MiniBatch {
  std::vector<double> inputs;   // rows of (state ++ action)
  std::vector<double> targets;  // rows of next state
  std::size_t count = 0;
  std::size_t input_dim = 0;
  std::size_t target_dim = 0;

  void validate() const;
};

double softplus(double x);
double softplus_inv(double y);
double sigmoid(double x);

// Posterior with mu ~ N(0, 0.05^2) and sigma = 0.1 * sigma_m everywhere.
VariationalPosterior init_posterior(const numkit::MlpSpec& spec,
                                    const PriorSpec& prior, numkit::Rng& rng);

// n parameter vectors theta = mu + sigma * eps, eps standard normal.
std::vector<std::vector<double>> sample_parameters(const VariationalPosterior& post,
                                                   numkit::Rng& rng, std::size_t n);

std::vector<double> predict_next_state(const VariationalPosterior& post,
                                       std::span<const double> theta,
                                       std::span<const double> state,
                                       std::span<const double> action);

double state_log_likelihood(std::span<const double> pred,
                            std::span<const double> actual,
                            const LikelihoodSpec& lik);

// 1/2 sum_i log(2 pi e sigma_i^2)
double posterior_entropy(const VariationalPosterior& post);

// KL(q || prior), closed form for diagonal Gaussians.
double kl_to_prior(const VariationalPosterior& post, const PriorSpec& prior);

// KL(p || q) between two posteriors over the same network.
double kl_between_posteriors(const VariationalPosterior& p,
                             const VariationalPosterior& q);

}  // namespace vase::bnn
