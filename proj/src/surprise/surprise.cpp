#include "vase/surprise/surprise.hpp"

#include <algorithm>
#include <cmath>

#include "vase/numkit/errors.hpp"

namespace vase::surprise {

SurpriseMode parse_mode(const std::string& name) {
  if (name == "none") return SurpriseMode::kNone;
  if (name == "nll") return SurpriseMode::kNll;
  if (name == "bayes") return SurpriseMode::kBayes;
  if (name == "vase") return SurpriseMode::kVase;
  throw InvalidArgument("unknown surprise mode '" + name + "'");
}

std::string mode_name(SurpriseMode mode) {
  switch (mode) {
    case SurpriseMode::kNone: return "none";
    case SurpriseMode::kNll: return "nll";
    case SurpriseMode::kBayes: return "bayes";
    case SurpriseMode::kVase: return "vase";
  }
  return "?";
}

void SurpriseConfig::validate() const {
  require(eta > 0.0 && eta <= 1.0, "SurpriseConfig: eta must be in (0, 1]");
  require(delta >= 0.0, "SurpriseConfig: delta must be >= 0");
  require(n_samples >= 1, "SurpriseConfig: n_samples must be >= 1");
  lik.validate();
}

namespace {

// Per-draw state log-likelihoods of s_next under n_samples posterior draws.
std::vector<double> sample_log_likelihoods(const bnn::VariationalPosterior& post,
                                           std::span<const double> s,
                                           std::span<const double> a,
                                           std::span<const double> s_next,
                                           const SurpriseConfig& cfg,
                                           numkit::Rng& rng) {
  const auto thetas = bnn::sample_parameters(post, rng, cfg.n_samples);
  std::vector<double> lls(cfg.n_samples);
  for (std::size_t k = 0; k < cfg.n_samples; ++k) {
    const auto pred = bnn::predict_next_state(post, thetas[k], s, a);
    lls[k] = bnn::state_log_likelihood(pred, s_next, cfg.lik);
  }
  return lls;
}

}  // namespace

double vase_surprise(const bnn::VariationalPosterior& post,
                     std::span<const double> s, std::span<const double> a,
                     std::span<const double> s_next, const SurpriseConfig& cfg,
                     numkit::Rng& rng) {
  cfg.validate();
  const auto lls = sample_log_likelihoods(post, s, a, s_next, cfg, rng);
  double mean_ll = 0.0;
  for (double ll : lls) mean_ll += ll;
  mean_ll /= static_cast<double>(cfg.n_samples);
  const double u = -mean_ll - cfg.delta * bnn::posterior_entropy(post);
  ensure_finite(u, "vase_surprise");
  return u;
}

double nll_surprise(const bnn::VariationalPosterior& post,
                    std::span<const double> s, std::span<const double> a,
                    std::span<const double> s_next, const SurpriseConfig& cfg,
                    numkit::Rng& rng) {
  cfg.validate();
  const auto lls = sample_log_likelihoods(post, s, a, s_next, cfg, rng);
  const double shift = *std::max_element(lls.begin(), lls.end());
  double acc = 0.0;
  for (double ll : lls) acc += std::exp(ll - shift);
  const double u = -(shift + std::log(acc / static_cast<double>(cfg.n_samples)));
  ensure_finite(u, "nll_surprise");
  return u;
}

double bayes_surprise(const bnn::VariationalPosterior& pre_update,
                      const bnn::VariationalPosterior& post_update) {
  return bnn::kl_between_posteriors(pre_update, post_update);
}

double bayes_surprise_for_transition(const bnn::VariationalPosterior& snapshot,
                                     std::span<const double> s,
                                     std::span<const double> a,
                                     std::span<const double> s_next,
                                     const SurpriseConfig& cfg,
                                     const BayesScoreSettings& settings,
                                     numkit::Rng& rng) {
  cfg.validate();
  bnn::MiniBatch one;
  one.count = 1;
  one.input_dim = s.size() + a.size();
  one.target_dim = s_next.size();
  one.inputs.insert(one.inputs.end(), s.begin(), s.end());
  one.inputs.insert(one.inputs.end(), a.begin(), a.end());
  one.targets.assign(s_next.begin(), s_next.end());

  bnn::VariationalPosterior scratch = snapshot;
  numkit::AdamMoments moments;
  bnn::elbo_update(scratch, one, settings.prior, cfg.lik, rng, settings.lr,
                   moments, 1, settings.kl_weight, cfg.n_samples);
  return bayes_surprise(snapshot, scratch);
}

double intrinsic_reward(double u, const SurpriseConfig& cfg) {
  if (cfg.mode == SurpriseMode::kNone) return 0.0;
  return cfg.eta * u;
}

namespace {

double score_one(const bnn::VariationalPosterior& snapshot,
                 std::span<const double> s, std::span<const double> a,
                 std::span<const double> s_next, const SurpriseConfig& cfg,
                 const BayesScoreSettings* bayes_settings, numkit::Rng& rng) {
  switch (cfg.mode) {
    case SurpriseMode::kNone:
      return 0.0;
    case SurpriseMode::kVase:
      return vase_surprise(snapshot, s, a, s_next, cfg, rng);
    case SurpriseMode::kNll:
      return nll_surprise(snapshot, s, a, s_next, cfg, rng);
    case SurpriseMode::kBayes:
      require(bayes_settings != nullptr,
              "score_transitions: bayes mode needs BayesScoreSettings");
      return bayes_surprise_for_transition(snapshot, s, a, s_next, cfg,
                                           *bayes_settings, rng);
  }
  return 0.0;
}

}  // namespace

std::vector<double> score_transitions(const bnn::VariationalPosterior& snapshot,
                                      std::span<const double> states,
                                      std::span<const double> actions,
                                      std::span<const double> next_states,
                                      std::size_t n, const SurpriseConfig& cfg,
                                      const numkit::Rng& rng_root,
                                      std::uint64_t step_base,
                                      const BayesScoreSettings* bayes_settings) {
  cfg.validate();
  snapshot.validate();
  const std::size_t sd = snapshot.spec.output_dim();
  const std::size_t ad = snapshot.spec.input_dim() - sd;
  check_length("score_transitions states", states.size(), n * sd);
  check_length("score_transitions actions", actions.size(), n * ad);
  check_length("score_transitions next_states", next_states.size(), n * sd);

  std::vector<double> out(n, 0.0);
  if (cfg.mode == SurpriseMode::kNone) return out;

  if (cfg.mode == SurpriseMode::kBayes) {
    // needs a scratch posterior per evaluation; kept serial
    for (std::size_t i = 0; i < n; ++i) {
      numkit::Rng rng = rng_root.split(step_base + i);
      out[i] = score_one(snapshot, states.subspan(i * sd, sd),
                         actions.subspan(i * ad, ad),
                         next_states.subspan(i * sd, sd), cfg, bayes_settings, rng);
    }
    return out;
  }

  ParallelExceptionGuard guard;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    guard.run([&, i] {
      numkit::Rng rng = rng_root.split(step_base + static_cast<std::uint64_t>(i));
      out[i] = score_one(snapshot, states.subspan(i * sd, sd),
                         actions.subspan(i * ad, ad),
                         next_states.subspan(i * sd, sd), cfg, bayes_settings, rng);
    });
  }
  guard.rethrow();
  return out;
}

namespace serial {

std::vector<double> score_transitions(const bnn::VariationalPosterior& snapshot,
                                      std::span<const double> states,
                                      std::span<const double> actions,
                                      std::span<const double> next_states,
                                      std::size_t n, const SurpriseConfig& cfg,
                                      const numkit::Rng& rng_root,
                                      std::uint64_t step_base,
                                      const BayesScoreSettings* bayes_settings) {
  cfg.validate();
  snapshot.validate();
  const std::size_t sd = snapshot.spec.output_dim();
  const std::size_t ad = snapshot.spec.input_dim() - sd;
  check_length("score_transitions states", states.size(), n * sd);
  check_length("score_transitions actions", actions.size(), n * ad);
  check_length("score_transitions next_states", next_states.size(), n * sd);

  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    numkit::Rng rng = rng_root.split(step_base + i);
    out[i] = score_one(snapshot, states.subspan(i * sd, sd),
                       actions.subspan(i * ad, ad),
                       next_states.subspan(i * sd, sd), cfg, bayes_settings, rng);
  }
  return out;
}

}  // namespace serial

}  // namespace vase::surprise
