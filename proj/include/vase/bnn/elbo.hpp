#pragma once

#include <vector>

#include "vase/bnn/posterior.hpp"
#include "vase/numkit/adam.hpp"

namespace vase::bnn {

struct ElboGradient {
  double value = 0.0;
  std::vector<double> d_mu;
  std::vector<double> d_rho;
};

// Variational lower bound on a minibatch: the Monte-Carlo expected state
// log-likelihood minus kl_weight * KL(q || prior). kl_weight is
// batch_size / replay_pool_size so that one epoch over the pool sums to the
// full-dataset bound.
double elbo(const VariationalPosterior& post, const MiniBatch& batch,
            const PriorSpec& prior, const LikelihoodSpec& lik,
            numkit::Rng& rng, std::size_t n_samples, double kl_weight);

// Same bound with caller-supplied noise (n_samples rows of |theta| draws);
// used to freeze the reparameterization for gradient checks.
double elbo_with_noise(const VariationalPosterior& post, const MiniBatch& batch,
                       const PriorSpec& prior, const LikelihoodSpec& lik,
                       const std::vector<double>& eps, std::size_t n_samples,
                       double kl_weight);

// Pathwise gradient of the bound with respect to (mu, rho) under the same
// frozen noise.
ElboGradient elbo_gradient_with_noise(const VariationalPosterior& post,
                                      const MiniBatch& batch,
                                      const PriorSpec& prior,
                                      const LikelihoodSpec& lik,
                                      const std::vector<double>& eps,
                                      std::size_t n_samples, double kl_weight);

// One Adam ascent step on the bound; t is the 1-based optimizer step count.
void elbo_update(VariationalPosterior& post, const MiniBatch& batch,
                 const PriorSpec& prior, const LikelihoodSpec& lik,
                 numkit::Rng& rng, double lr, numkit::AdamMoments& moments,
                 long t, double kl_weight, std::size_t n_samples = 1);

}  // namespace vase::bnn
