#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "vase/bnn/checkpoint.hpp"
#include "vase/bnn/elbo.hpp"
#include "vase/bnn/posterior.hpp"
#include "vase/numkit/errors.hpp"

using namespace vase;
using namespace vase::bnn;
using numkit::Rng;

namespace {

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double simpson(const std::function<double(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double whole = simpson(f, a, b);
  const double left = simpson(f, a, m);
  const double right = simpson(f, m, b);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, tol / 2, depth - 1);
}

// KL between 1-D Gaussians by numerical quadrature. Log densities are used
// directly so the tails cannot underflow into inf * 0.
double kl_quadrature(double mp, double sp, double mq, double sq) {
  auto log_pdf = [](double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
  };
  auto integrand = [=](double x) {
    const double lp = log_pdf(x, mp, sp);
    if (lp < -700.0) return 0.0;
    return std::exp(lp) * (lp - log_pdf(x, mq, sq));
  };
  const double lo = std::min(mp - 14 * sp, mq - 14 * sq);
  const double hi = std::max(mp + 14 * sp, mq + 14 * sq);
  return adaptive_simpson(integrand, lo, hi, 1e-9, 18);
}

VariationalPosterior make_posterior(const std::vector<int>& layers,
                                    const std::vector<double>& mu,
                                    const std::vector<double>& sigma) {
  VariationalPosterior post;
  post.spec.layers = layers;
  post.spec.hidden = numkit::Activation::kTanh;
  post.mu = mu;
  post.rho.resize(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) post.rho[i] = softplus_inv(sigma[i]);
  post.validate();
  return post;
}

// A [1,1] network has exactly two parameters (w, b).
VariationalPosterior tiny_posterior(double mu_w, double mu_b, double s_w, double s_b) {
  return make_posterior({1, 1}, {mu_w, mu_b}, {s_w, s_b});
}

MiniBatch linear_batch(std::size_t n, Rng& rng) {
  MiniBatch batch;
  batch.count = n;
  batch.input_dim = 3;
  batch.target_dim = 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = rng.uniform(-1, 1), x1 = rng.uniform(-1, 1), x2 = rng.uniform(-1, 1);
    batch.inputs.insert(batch.inputs.end(), {x0, x1, x2});
    batch.targets.insert(batch.targets.end(),
                         {0.5 * x0 - 0.3 * x1 + 0.2, -0.7 * x2 + 0.1 * x0});
  }
  return batch;
}

}  // namespace

TEST_CASE("sample_parameters degenerate posterior returns mu") {
  VariationalPosterior post = make_posterior({2, 2}, {0.3, -0.7, 0.1, 0.0, 0.0, 0.0},
                                             {1, 1, 1, 1, 1, 1});
  post.rho.assign(post.rho.size(), -40.0);
  Rng rng(1);
  const auto thetas = sample_parameters(post, rng, 5);
  for (const auto& theta : thetas) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      CHECK(std::abs(theta[i] - post.mu[i]) < 1e-12);
    }
  }
}

TEST_CASE("sample_parameters Monte-Carlo moments") {
  VariationalPosterior post = tiny_posterior(0.0, 0.0, 1.0, 1.0);
  Rng rng(2);
  const auto thetas = sample_parameters(post, rng, 100'000);
  double mean_w = 0.0, mean_b = 0.0;
  for (const auto& t : thetas) {
    mean_w += t[0];
    mean_b += t[1];
  }
  mean_w /= 100'000.0;
  mean_b /= 100'000.0;
  CHECK(std::abs(mean_w) < 0.02);
  CHECK(std::abs(mean_b) < 0.02);
}

TEST_CASE("sample_parameters returns n vectors of the parameter count") {
  VariationalPosterior post = make_posterior({3, 4, 2}, std::vector<double>(26, 0.0),
                                             std::vector<double>(26, 0.5));
  Rng rng(3);
  const auto thetas = sample_parameters(post, rng, 10);
  REQUIRE(thetas.size() == 10);
  for (const auto& t : thetas) CHECK(t.size() == 26);
}

TEST_CASE("sample_parameters is a pure function of (mu, rho) given frozen rng") {
  VariationalPosterior post = make_posterior({2, 3, 1}, std::vector<double>(13, 0.2),
                                             std::vector<double>(13, 0.3));
  Rng a(77), b(77);
  CHECK(sample_parameters(post, a, 4) == sample_parameters(post, b, 4));
}

TEST_CASE("predict_next_state zero parameters give zero output") {
  VariationalPosterior post = make_posterior({3, 4, 2}, std::vector<double>(26, 0.0),
                                             std::vector<double>(26, 0.5));
  std::vector<double> theta(26, 0.0);
  const auto pred = predict_next_state(post, theta, std::vector<double>{1.0, -2.0},
                                       std::vector<double>{0.5});
  for (double v : pred) CHECK(v == 0.0);
}

TEST_CASE("predict_next_state equals mlp_forward on the concatenated input") {
  VariationalPosterior post = make_posterior({3, 5, 2}, std::vector<double>(32, 0.0),
                                             std::vector<double>(32, 0.5));
  Rng rng(4);
  auto theta = sample_parameters(post, rng, 1)[0];
  const std::vector<double> s{0.2, -0.4}, a{0.9};
  const auto direct = predict_next_state(post, theta, s, a);
  const auto ref = numkit::mlp_forward(post.spec, theta, std::vector<double>{0.2, -0.4, 0.9});
  CHECK(direct == ref);
}

TEST_CASE("state_log_likelihood closed form at zero error, sigma_c=5") {
  LikelihoodSpec lik{5.0, false};
  const std::vector<double> s{1.0, 2.0};
  const double ll = state_log_likelihood(s, s, lik);
  CHECK(ll == doctest::Approx(-0.5 * std::log(2 * std::numbers::pi * 25.0)).epsilon(1e-12));
  CHECK(ll == doctest::Approx(-2.5284).epsilon(1e-4));
}

TEST_CASE("state_log_likelihood quadratic penalty scaling") {
  LikelihoodSpec lik{2.0, false};
  const std::vector<double> a{0.0, 0.0};
  const std::vector<double> b{0.3, -0.4};       // norm 0.5
  const std::vector<double> b2{0.6, -0.8};      // norm 1.0
  const double base = state_log_likelihood(a, a, lik);
  const double p1 = base - state_log_likelihood(b, a, lik);
  const double p2 = base - state_log_likelihood(b2, a, lik);
  CHECK(p2 == doctest::Approx(4.0 * p1).epsilon(1e-12));
}

TEST_CASE("state_log_likelihood penalty vanishes as sigma_c grows") {
  const std::vector<double> p{1.0}, q{3.0};
  LikelihoodSpec wide{1e9, false};
  const double ll = state_log_likelihood(p, q, wide);
  const double normalizer = -0.5 * std::log(2 * std::numbers::pi * 1e18);
  CHECK(ll == doctest::Approx(normalizer).epsilon(1e-12));
}

TEST_CASE("state_log_likelihood dimension mismatch") {
  LikelihoodSpec lik{1.0, false};
  CHECK_THROWS_AS(state_log_likelihood(std::vector<double>{1.0},
                                       std::vector<double>{1.0, 2.0}, lik),
                  InvalidArgument);
}

TEST_CASE("posterior_entropy closed form and Monte-Carlo oracle") {
  VariationalPosterior post = tiny_posterior(0.7, -0.2, 1.0, 0.6);
  const double analytic = posterior_entropy(post);
  const double expect = 0.5 * std::log(2 * std::numbers::pi * std::numbers::e) +
                        0.5 * std::log(2 * std::numbers::pi * std::numbers::e * 0.36);
  CHECK(analytic == doctest::Approx(expect).epsilon(1e-12));

  // MC estimate of E[-log q(theta)] over 1e6 draws.
  Rng rng(5);
  const auto sigma = post.sigma();
  double acc = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    double neg_log_q = 0.0;
    for (std::size_t k = 0; k < post.size(); ++k) {
      const double theta = post.mu[k] + sigma[k] * rng.normal();
      neg_log_q -= std::log(normal_pdf(theta, post.mu[k], sigma[k]));
    }
    acc += neg_log_q;
  }
  CHECK(std::abs(analytic - acc / n) < 1e-2);
}

TEST_CASE("posterior_entropy single unit Gaussian is about 1.4189") {
  VariationalPosterior post = make_posterior({1, 1}, {0.0, 0.0}, {1.0, 1.0});
  // restrict to one parameter by checking additivity instead
  const double both = posterior_entropy(post);
  CHECK(both == doctest::Approx(2 * 1.41894).epsilon(1e-4));
}

TEST_CASE("posterior_entropy additivity and log scaling") {
  VariationalPosterior base = make_posterior({2, 2, 1}, std::vector<double>(9, 0.0),
                                             std::vector<double>(9, 1.0));
  const double h0 = posterior_entropy(base);
  CHECK(h0 == doctest::Approx(9 * 1.4189385332046727).epsilon(1e-12));

  VariationalPosterior halved = base;
  halved.rho[3] = softplus_inv(0.5);
  CHECK(h0 - posterior_entropy(halved) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("posterior_entropy invariances") {
  VariationalPosterior p = make_posterior({2, 1}, {0.4, -0.9, 0.3}, {0.2, 1.7, 0.5});
  VariationalPosterior perm = make_posterior({2, 1}, {0.3, 0.4, -0.9}, {0.5, 0.2, 1.7});
  VariationalPosterior flipped = p;
  for (auto& m : flipped.mu) m = -m;
  CHECK(posterior_entropy(p) == doctest::Approx(posterior_entropy(perm)).epsilon(1e-14));
  CHECK(posterior_entropy(p) == doctest::Approx(posterior_entropy(flipped)).epsilon(1e-14));
}

TEST_CASE("kl_to_prior zero iff posterior equals prior") {
  PriorSpec prior{0.5};
  VariationalPosterior post = make_posterior({1, 1}, {0.0, 0.0}, {0.5, 0.5});
  CHECK(kl_to_prior(post, prior) == doctest::Approx(0.0).epsilon(1e-14));

  VariationalPosterior shifted = make_posterior({1, 1}, {0.5, 0.0}, {0.5, 0.5});
  // single-parameter contribution mu^2 / (2 sigma_m^2) = 0.5
  CHECK(kl_to_prior(shifted, prior) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kl_to_prior matches quadrature for widened posterior") {
  PriorSpec prior{0.8};
  VariationalPosterior post = make_posterior({1, 1}, {0.0, 0.0}, {1.6, 0.8});
  const double analytic = kl_to_prior(post, prior);
  const double numeric = kl_quadrature(0.0, 1.6, 0.0, 0.8);
  CHECK(std::abs(analytic - numeric) < 1e-6);
}

TEST_CASE("kl_between_posteriors basics and quadrature") {
  VariationalPosterior p = tiny_posterior(1.0, 0.0, 1.0, 1.0);
  VariationalPosterior q = tiny_posterior(0.0, 0.0, 1.0, 1.0);
  CHECK(kl_between_posteriors(p, p) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(kl_between_posteriors(p, q) == doctest::Approx(0.5).epsilon(1e-12));

  VariationalPosterior a = tiny_posterior(0.3, -0.6, 0.7, 1.9);
  VariationalPosterior b = tiny_posterior(-0.2, 0.5, 1.2, 0.4);
  const double analytic = kl_between_posteriors(a, b);
  const double numeric =
      kl_quadrature(0.3, 0.7, -0.2, 1.2) + kl_quadrature(-0.6, 1.9, 0.5, 0.4);
  CHECK(std::abs(analytic - numeric) < 1e-6);

  VariationalPosterior other = make_posterior({2, 1}, {0, 0, 0}, {1, 1, 1});
  CHECK_THROWS_AS(kl_between_posteriors(a, other), InvalidArgument);
}

TEST_CASE("kl nonnegativity over random posterior pairs") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    VariationalPosterior a = tiny_posterior(rng.uniform(-3, 3), rng.uniform(-3, 3),
                                            rng.uniform(0.05, 3), rng.uniform(0.05, 3));
    VariationalPosterior b = tiny_posterior(rng.uniform(-3, 3), rng.uniform(-3, 3),
                                            rng.uniform(0.05, 3), rng.uniform(0.05, 3));
    CHECK(kl_between_posteriors(a, b) >= 0.0);
    PriorSpec prior{rng.uniform(0.05, 3)};
    CHECK(kl_to_prior(a, prior) >= -1e-15);
  }
}

TEST_CASE("elbo is dominated by the likelihood term for a perfect degenerate fit") {
  // mu = 0 network reproduces all-zero targets exactly; sigma ~ 0.
  VariationalPosterior post = make_posterior({2, 2, 1}, std::vector<double>(9, 0.0),
                                             std::vector<double>(9, 1.0));
  post.rho.assign(post.rho.size(), -40.0);
  MiniBatch batch;
  batch.count = 8;
  batch.input_dim = 2;
  batch.target_dim = 1;
  Rng rng(7);
  for (int i = 0; i < 8; ++i) {
    batch.inputs.insert(batch.inputs.end(), {rng.uniform(-1, 1), rng.uniform(-1, 1)});
    batch.targets.push_back(0.0);
  }
  PriorSpec prior{1e6};
  LikelihoodSpec lik{5.0, false};
  const double v = elbo(post, batch, prior, lik, rng, 1, 1e-9);
  const double expect = 8.0 * (-0.5 * std::log(2 * std::numbers::pi * 25.0));
  CHECK(v == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("elbo changes by exactly the duplicated transition's likelihood") {
  Rng rng(8);
  MiniBatch batch = linear_batch(6, rng);
  VariationalPosterior post = make_posterior(
      {3, 4, 2}, std::vector<double>(26, 0.1), std::vector<double>(26, 0.2));
  PriorSpec prior{0.5};
  LikelihoodSpec lik{5.0, false};
  const std::size_t n_samples = 3;
  std::vector<double> eps(n_samples * post.size());
  Rng noise(9);
  for (auto& e : eps) e = noise.normal();

  MiniBatch bigger = batch;
  bigger.count += 1;
  bigger.inputs.insert(bigger.inputs.end(), batch.inputs.begin(), batch.inputs.begin() + 3);
  bigger.targets.insert(bigger.targets.end(), batch.targets.begin(), batch.targets.begin() + 2);

  const double small = elbo_with_noise(post, batch, prior, lik, eps, n_samples, 0.01);
  const double big = elbo_with_noise(post, bigger, prior, lik, eps, n_samples, 0.01);

  // Expected contribution of the duplicated row under the same noise.
  const auto sigma = post.sigma();
  double contrib = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    std::vector<double> theta(post.size());
    for (std::size_t i = 0; i < post.size(); ++i) {
      theta[i] = post.mu[i] + sigma[i] * eps[s * post.size() + i];
    }
    const auto pred = numkit::mlp_forward(post.spec, theta,
                                          std::span(batch.inputs).subspan(0, 3));
    contrib += state_log_likelihood(pred, std::span(batch.targets).subspan(0, 2), lik);
  }
  contrib /= static_cast<double>(n_samples);
  CHECK(big - small == doctest::Approx(contrib).epsilon(1e-10));
}

TEST_CASE("elbo gradient matches finite differences under frozen noise") {
  Rng rng(10);
  MiniBatch batch = linear_batch(4, rng);
  VariationalPosterior post = make_posterior(
      {3, 3, 2}, std::vector<double>(20, 0.0), std::vector<double>(20, 0.3));
  for (auto& m : post.mu) m = rng.uniform(-0.5, 0.5);
  PriorSpec prior{0.5};
  LikelihoodSpec lik{5.0, false};
  const std::size_t n_samples = 2;
  std::vector<double> eps(n_samples * post.size());
  for (auto& e : eps) e = rng.normal();
  const double kl_weight = 0.37;

  const auto grad =
      elbo_gradient_with_noise(post, batch, prior, lik, eps, n_samples, kl_weight);

  const double h = 1e-6;
  for (std::size_t i = 0; i < post.size(); ++i) {
    VariationalPosterior up = post, dn = post;
    up.mu[i] += h;
    dn.mu[i] -= h;
    const double fd = (elbo_with_noise(up, batch, prior, lik, eps, n_samples, kl_weight) -
                       elbo_with_noise(dn, batch, prior, lik, eps, n_samples, kl_weight)) /
                      (2 * h);
    CHECK(std::abs(grad.d_mu[i] - fd) / std::max(std::abs(grad.d_mu[i]), 1e-8) < 1e-4);

    up = post;
    dn = post;
    up.rho[i] += h;
    dn.rho[i] -= h;
    const double fd_rho =
        (elbo_with_noise(up, batch, prior, lik, eps, n_samples, kl_weight) -
         elbo_with_noise(dn, batch, prior, lik, eps, n_samples, kl_weight)) /
        (2 * h);
    CHECK(std::abs(grad.d_rho[i] - fd_rho) / std::max(std::abs(grad.d_rho[i]), 1e-8) < 1e-4);
  }
}

TEST_CASE("elbo_update fixed point on an exactly-flat gradient") {
  VariationalPosterior post = make_posterior({2, 2, 1}, std::vector<double>(9, 0.0),
                                             std::vector<double>(9, 1.0));
  post.rho.assign(post.rho.size(), -744.0);  // sigma is subnormal but positive
  MiniBatch batch;
  batch.count = 2;
  batch.input_dim = 2;
  batch.target_dim = 1;
  batch.inputs = {0.5, -0.5, 1.0, 0.25};
  batch.targets = {0.0, 0.0};
  PriorSpec prior{0.5};
  LikelihoodSpec lik{5.0, false};
  Rng rng(11);
  numkit::AdamMoments mom;
  const auto mu_before = post.mu;
  const auto rho_before = post.rho;
  elbo_update(post, batch, prior, lik, rng, 0.01, mom, 1, /*kl_weight=*/0.0);
  CHECK(post.mu == mu_before);
  CHECK(post.rho == rho_before);
}

TEST_CASE("elbo_update learns a deterministic linear mapping") {
  Rng rng(12);
  MiniBatch data = linear_batch(64, rng);
  numkit::MlpSpec spec{{3, 8, 2}, numkit::Activation::kTanh};
  PriorSpec prior{0.5};
  LikelihoodSpec lik{5.0, false};
  VariationalPosterior post = init_posterior(spec, prior, rng);
  numkit::AdamMoments mom;
  for (long t = 1; t <= 2000; ++t) {
    elbo_update(post, data, prior, lik, rng, 0.01, mom, t, /*kl_weight=*/1e-4);
  }
  // mean prediction error of the posterior-mean network
  double err = 0.0;
  for (std::size_t r = 0; r < data.count; ++r) {
    const auto pred = numkit::mlp_forward(
        spec, post.mu, std::span(data.inputs).subspan(r * 3, 3));
    double sq = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double d = pred[j] - data.targets[r * 2 + j];
      sq += d * d;
    }
    err += std::sqrt(sq);
  }
  err /= static_cast<double>(data.count);
  CHECK(err < 0.05);
}

TEST_CASE("kl pull alone moves mu monotonically toward zero") {
  VariationalPosterior post = make_posterior({1, 1}, {0.8, -0.6}, {0.1, 0.1});
  MiniBatch batch;
  batch.count = 1;
  batch.input_dim = 1;
  batch.target_dim = 1;
  batch.inputs = {0.3};
  batch.targets = {0.1};
  PriorSpec prior{0.5};
  LikelihoodSpec lik{1e12, false};  // likelihood gradient negligible
  Rng rng(13);
  numkit::AdamMoments mom;
  double prev0 = std::abs(post.mu[0]), prev1 = std::abs(post.mu[1]);
  for (long t = 1; t <= 100; ++t) {
    elbo_update(post, batch, prior, lik, rng, 0.005, mom, t, /*kl_weight=*/1.0);
    CHECK(std::abs(post.mu[0]) <= prev0 + 1e-12);
    CHECK(std::abs(post.mu[1]) <= prev1 + 1e-12);
    prev0 = std::abs(post.mu[0]);
    prev1 = std::abs(post.mu[1]);
  }
  CHECK(prev0 < 0.8);
  CHECK(prev1 < 0.6);
}

TEST_CASE("trained elbo stays below the exact log evidence (conjugate case)") {
  // Bayesian linear regression y = w x + b + noise with Gaussian prior is
  // conjugate; the evidence is a zero-mean Gaussian with covariance
  // sigma_c^2 I + sigma_m^2 X X^T over the stacked targets.
  const double sigma_c = 0.7, sigma_m = 1.3;
  const std::vector<double> xs{-1.0, -0.5, 0.0, 0.4, 0.9, 1.5};
  const std::vector<double> ys{-0.9, -0.1, 0.3, 0.5, 1.1, 1.8};
  const std::size_t n = xs.size();

  // Sigma = sigma_c^2 I + sigma_m^2 (x x^T + 1 1^T), Cholesky solve.
  std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cov[i][j] = sigma_m * sigma_m * (xs[i] * xs[j] + 1.0);
      if (i == j) cov[i][j] += sigma_c * sigma_c;
    }
  }
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = cov[i][j];
      for (std::size_t k = 0; k < j; ++k) acc -= L[i][k] * L[j][k];
      L[i][j] = (i == j) ? std::sqrt(acc) : acc / L[j][j];
    }
  }
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = ys[i];
    for (std::size_t k = 0; k < i; ++k) acc -= L[i][k] * z[k];
    z[i] = acc / L[i][i];
  }
  double quad = 0.0, logdet = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    quad += z[i] * z[i];
    logdet += 2.0 * std::log(L[i][i]);
  }
  const double log_evidence =
      -0.5 * (quad + logdet + n * std::log(2 * std::numbers::pi));

  MiniBatch batch;
  batch.count = n;
  batch.input_dim = 1;
  batch.target_dim = 1;
  batch.inputs = xs;
  batch.targets = ys;
  PriorSpec prior{sigma_m};
  LikelihoodSpec lik{sigma_c, false};
  numkit::MlpSpec spec{{1, 1}, numkit::Activation::kTanh};
  Rng rng(14);
  VariationalPosterior post = init_posterior(spec, prior, rng);
  numkit::AdamMoments mom;
  for (long t = 1; t <= 3000; ++t) {
    elbo_update(post, batch, prior, lik, rng, 0.01, mom, t, /*kl_weight=*/1.0);
  }

  // 200 independent bound estimates, 100 Monte-Carlo samples each.
  std::vector<double> estimates;
  for (int k = 0; k < 200; ++k) {
    estimates.push_back(elbo(post, batch, prior, lik, rng, 100, 1.0));
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= estimates.size();
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= (estimates.size() - 1);
  const double se = std::sqrt(var / estimates.size());
  CHECK(mean - log_evidence <= 3.0 * se);
  // and the trained bound should actually be near the evidence
  CHECK(mean > log_evidence - 1.0);
}

TEST_CASE("posterior checkpoint round-trips bit-exactly") {
  Rng rng(15);
  numkit::MlpSpec spec{{4, 6, 3}, numkit::Activation::kRelu};
  PriorSpec prior{0.5};
  LikelihoodSpec lik{5.0, true};
  VariationalPosterior post = init_posterior(spec, prior, rng);
  for (auto& m : post.mu) m = rng.normal();
  for (auto& r : post.rho) r = rng.uniform(-3.0, 1.0);

  std::stringstream ss;
  save_posterior(ss, post, prior, lik);
  const std::string first = ss.str();
  const auto loaded = load_posterior(ss);
  CHECK(loaded.posterior.spec == spec);
  CHECK(loaded.posterior.mu == post.mu);
  CHECK(loaded.posterior.rho == post.rho);
  CHECK(loaded.prior.sigma_m == prior.sigma_m);
  CHECK(loaded.likelihood.sigma_c == lik.sigma_c);
  CHECK(loaded.likelihood.per_dimension == lik.per_dimension);

  std::stringstream again;
  save_posterior(again, loaded.posterior, loaded.prior, loaded.likelihood);
  CHECK(again.str() == first);
}

TEST_CASE("elbo rejects an empty batch") {
  VariationalPosterior post = tiny_posterior(0, 0, 1, 1);
  MiniBatch batch;
  batch.input_dim = 1;
  batch.target_dim = 1;
  PriorSpec prior{0.5};
  LikelihoodSpec lik{5.0, false};
  Rng rng(16);
  CHECK_THROWS_AS(elbo(post, batch, prior, lik, rng, 1, 1.0), InvalidArgument);
}
