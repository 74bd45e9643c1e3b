#include "vase/bnn/elbo.hpp"

#include <cmath>
#include <numbers>

#include "vase/numkit/batch.hpp"
#include "vase/numkit/errors.hpp"

namespace vase::bnn {

namespace {

std::vector<double> draw_noise(numkit::Rng& rng, std::size_t n_samples,
                               std::size_t dim) {
  std::vector<double> eps(n_samples * dim);
  for (auto& e : eps) e = rng.normal();
  return eps;
}

// Sum over rows of log-likelihood of batch targets under theta, and
// optionally the accumulated parameter gradient.
double batch_log_likelihood(const VariationalPosterior& post,
                            const MiniBatch& batch, const LikelihoodSpec& lik,
                            const std::vector<double>& theta,
                            std::vector<double>* d_theta) {
  const std::size_t n = batch.count;
  const std::size_t out_dim = batch.target_dim;
  const double var = lik.sigma_c * lik.sigma_c;

  std::vector<double> preds(n * out_dim);
  numkit::mlp_forward_batch(post.spec, theta, batch.inputs, n, preds);

  double total = 0.0;
  const double normalizer =
      lik.per_dimension
          ? 0.5 * static_cast<double>(out_dim) * std::log(2.0 * std::numbers::pi * var)
          : 0.5 * std::log(2.0 * std::numbers::pi * var);
  std::vector<double> output_grads;
  if (d_theta) output_grads.resize(n * out_dim);
  for (std::size_t r = 0; r < n; ++r) {
    double sq = 0.0;
    for (std::size_t j = 0; j < out_dim; ++j) {
      const double d = preds[r * out_dim + j] - batch.targets[r * out_dim + j];
      sq += d * d;
      if (d_theta) output_grads[r * out_dim + j] = -d / var;
    }
    total += -sq / (2.0 * var) - normalizer;
  }
  if (d_theta) {
    *d_theta = numkit::mlp_gradient_batch(post.spec, theta, batch.inputs,
                                          output_grads, n);
  }
  return total;
}

}  // namespace

double elbo_with_noise(const VariationalPosterior& post, const MiniBatch& batch,
                       const PriorSpec& prior, const LikelihoodSpec& lik,
                       const std::vector<double>& eps, std::size_t n_samples,
                       double kl_weight) {
  post.validate();
  batch.validate();
  lik.validate();
  require(n_samples >= 1, "elbo: n_samples must be >= 1");
  check_length("elbo noise", eps.size(), n_samples * post.size());

  const auto sigma = post.sigma();
  double lik_term = 0.0;
  std::vector<double> theta(post.size());
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double* e = eps.data() + s * post.size();
    for (std::size_t i = 0; i < post.size(); ++i) {
      theta[i] = post.mu[i] + sigma[i] * e[i];
    }
    lik_term += batch_log_likelihood(post, batch, lik, theta, nullptr);
  }
  lik_term /= static_cast<double>(n_samples);
  const double value = lik_term - kl_weight * kl_to_prior(post, prior);
  ensure_finite(value, "elbo");
  return value;
}

double elbo(const VariationalPosterior& post, const MiniBatch& batch,
            const PriorSpec& prior, const LikelihoodSpec& lik,
            numkit::Rng& rng, std::size_t n_samples, double kl_weight) {
  require(n_samples >= 1, "elbo: n_samples must be >= 1");
  post.validate();
  const auto eps = draw_noise(rng, n_samples, post.size());
  return elbo_with_noise(post, batch, prior, lik, eps, n_samples, kl_weight);
}

ElboGradient elbo_gradient_with_noise(const VariationalPosterior& post,
                                      const MiniBatch& batch,
                                      const PriorSpec& prior,
                                      const LikelihoodSpec& lik,
                                      const std::vector<double>& eps,
                                      std::size_t n_samples, double kl_weight) {
  post.validate();
  batch.validate();
  lik.validate();
  prior.validate();
  require(n_samples >= 1, "elbo_gradient: n_samples must be >= 1");
  check_length("elbo_gradient noise", eps.size(), n_samples * post.size());

  const auto sigma = post.sigma();
  const std::size_t dim = post.size();

  ElboGradient out;
  out.d_mu.assign(dim, 0.0);
  out.d_rho.assign(dim, 0.0);

  double lik_term = 0.0;
  std::vector<double> theta(dim), d_theta;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double* e = eps.data() + s * dim;
    for (std::size_t i = 0; i < dim; ++i) theta[i] = post.mu[i] + sigma[i] * e[i];
    lik_term += batch_log_likelihood(post, batch, lik, theta, &d_theta);
    for (std::size_t i = 0; i < dim; ++i) {
      out.d_mu[i] += d_theta[i];
      out.d_rho[i] += d_theta[i] * e[i] * sigmoid(post.rho[i]);
    }
  }
  const double inv_s = 1.0 / static_cast<double>(n_samples);
  lik_term *= inv_s;
  for (std::size_t i = 0; i < dim; ++i) {
    out.d_mu[i] *= inv_s;
    out.d_rho[i] *= inv_s;
  }

  // KL(q || prior) gradients: d/dmu = mu / sigma_m^2,
  // d/dsigma = sigma / sigma_m^2 - 1 / sigma, chained through softplus.
  // sigmoid(rho)/sigma is formed as one ratio; both factors underflow
  // together for very negative rho while the ratio stays near 1.
  const double var_m = prior.sigma_m * prior.sigma_m;
  for (std::size_t i = 0; i < dim; ++i) {
    out.d_mu[i] -= kl_weight * post.mu[i] / var_m;
    const double sig = sigmoid(post.rho[i]);
    const double d_rho_kl = sigma[i] * sig / var_m - sig / sigma[i];
    out.d_rho[i] -= kl_weight * d_rho_kl;
  }

  out.value = lik_term - kl_weight * kl_to_prior(post, prior);
  ensure_finite(out.d_mu, "elbo_gradient mu");
  ensure_finite(out.d_rho, "elbo_gradient rho");
  return out;
}

void elbo_update(VariationalPosterior& post, const MiniBatch& batch,
                 const PriorSpec& prior, const LikelihoodSpec& lik,
                 numkit::Rng& rng, double lr, numkit::AdamMoments& moments,
                 long t, double kl_weight, std::size_t n_samples) {
  post.validate();
  const auto eps = draw_noise(rng, n_samples, post.size());
  const auto grad =
      elbo_gradient_with_noise(post, batch, prior, lik, eps, n_samples, kl_weight);

  // Adam performs descent; ascend the bound by stepping on its negation.
  const std::size_t dim = post.size();
  std::vector<double> params(2 * dim), grads(2 * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    params[i] = post.mu[i];
    params[dim + i] = post.rho[i];
    grads[i] = -grad.d_mu[i];
    grads[dim + i] = -grad.d_rho[i];
  }
  numkit::adam_step(params, grads, moments, lr, t);
  for (std::size_t i = 0; i < dim; ++i) {
    post.mu[i] = params[i];
    post.rho[i] = params[dim + i];
  }
}

}  // namespace vase::bnn
