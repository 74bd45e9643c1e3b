#include "vase/bnn/posterior.hpp"

#include <cmath>
#include <numbers>

#include "vase/numkit/errors.hpp"

namespace vase::bnn {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
}

void PriorSpec::validate() const {
  require(sigma_m > 0.0, "PriorSpec: sigma_m must be positive");
}

void LikelihoodSpec::validate() const {
  require(sigma_c > 0.0, "LikelihoodSpec: sigma_c must be positive");
}

void VariationalPosterior::validate() const {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.param_count());
  check_length("VariationalPosterior mu", mu.size(), n);
  check_length("VariationalPosterior rho", rho.size(), n);
}

double softplus(double x) {
  // max(x,0) + log1p(exp(-|x|)) avoids overflow on both tails.
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double softplus_inv(double y) {
  require(y > 0.0, "softplus_inv: argument must be positive");
  if (y > 30.0) return y;
  return std::log(std::expm1(y));
}

double sigmoid(double x) {
  if (x >= 0.0) {
    const double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

std::vector<double> VariationalPosterior::sigma() const {
  std::vector<double> s(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) s[i] = softplus(rho[i]);
  return s;
}

VariationalPosterior init_posterior(const numkit::MlpSpec& spec,
                                    const PriorSpec& prior, numkit::Rng& rng) {
  spec.validate();
  prior.validate();
  VariationalPosterior post;
  post.spec = spec;
  const auto n = static_cast<std::size_t>(spec.param_count());
  post.mu.resize(n);
  post.rho.assign(n, softplus_inv(0.1 * prior.sigma_m));
  for (auto& m : post.mu) m = 0.05 * rng.normal();
  return post;
}

std::vector<std::vector<double>> sample_parameters(const VariationalPosterior& post,
                                                   numkit::Rng& rng, std::size_t n) {
  post.validate();
  require(n >= 1, "sample_parameters: n must be >= 1");
  const auto s = post.sigma();
  std::vector<std::vector<double>> thetas(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto& theta = thetas[k];
    theta.resize(post.size());
    for (std::size_t i = 0; i < post.size(); ++i) {
      theta[i] = post.mu[i] + s[i] * rng.normal();
    }
  }
  return thetas;
}

std::vector<double> predict_next_state(const VariationalPosterior& post,
                                       std::span<const double> theta,
                                       std::span<const double> state,
                                       std::span<const double> action) {
  check_length("predict_next_state theta", theta.size(), post.size());
  std::vector<double> input;
  input.reserve(state.size() + action.size());
  input.insert(input.end(), state.begin(), state.end());
  input.insert(input.end(), action.begin(), action.end());
  return numkit::mlp_forward(post.spec, theta, input);
}

double state_log_likelihood(std::span<const double> pred,
                            std::span<const double> actual,
                            const LikelihoodSpec& lik) {
  lik.validate();
  check_length("state_log_likelihood actual", actual.size(), pred.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - actual[i];
    sq += d * d;
  }
  const double var = lik.sigma_c * lik.sigma_c;
  const double normalizer = lik.per_dimension
                                ? 0.5 * static_cast<double>(pred.size()) * std::log(2.0 * std::numbers::pi * var)
                                : 0.5 * std::log(2.0 * std::numbers::pi * var);
  const double ll = -sq / (2.0 * var) - normalizer;
  ensure_finite(ll, "state_log_likelihood");
  return ll;
}

double posterior_entropy(const VariationalPosterior& post) {
  post.validate();
  double h = 0.0;
  for (double r : post.rho) {
    const double s = softplus(r);
    h += 0.5 * (kLog2Pi + 1.0 + 2.0 * std::log(s));
  }
  ensure_finite(h, "posterior_entropy");
  return h;
}

double kl_to_prior(const VariationalPosterior& post, const PriorSpec& prior) {
  post.validate();
  prior.validate();
  const double var_m = prior.sigma_m * prior.sigma_m;
  double kl = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i) {
    const double s = softplus(post.rho[i]);
    // log difference instead of a ratio: the ratio overflows for subnormal s
    kl += std::log(prior.sigma_m) - std::log(s) +
          (s * s + post.mu[i] * post.mu[i]) / (2.0 * var_m) - 0.5;
  }
  ensure_finite(kl, "kl_to_prior");
  return kl;
}

double kl_between_posteriors(const VariationalPosterior& p,
                             const VariationalPosterior& q) {
  p.validate();
  q.validate();
  require(p.spec == q.spec, "kl_between_posteriors: posterior specs differ");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double sp = softplus(p.rho[i]);
    const double sq = softplus(q.rho[i]);
    const double dm = p.mu[i] - q.mu[i];
    kl += std::log(sq) - std::log(sp) + (sp * sp + dm * dm) / (2.0 * sq * sq) - 0.5;
  }
  ensure_finite(kl, "kl_between_posteriors");
  return kl;
}

void MiniBatch::validate() const {
  require(count >= 1, "MiniBatch: empty batch");
  check_length("MiniBatch inputs", inputs.size(), count * input_dim);
  check_length("MiniBatch targets", targets.size(), count * target_dim);
}

}  // namespace vase::bnn
