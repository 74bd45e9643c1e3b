#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vase/bnn/elbo.hpp"
#include "vase/bnn/posterior.hpp"

namespace vase::surprise {

enum class SurpriseMode { kNone, kNll, kBayes, kVase };

SurpriseMode parse_mode(const std::string& name);
std::string mode_name(SurpriseMode mode);

struct SurpriseConfig {
  SurpriseMode mode = SurpriseMode::kVase;
  double delta = 1e-3;         // entropy trade-off
  double eta = 1e-3;           // intrinsic reward scale
  std::size_t n_samples = 10;  // posterior draws per evaluation
  bnn::LikelihoodSpec lik{};
  bool normalize_median = false;  // divide u by a running median of batch medians

  void validate() const;
};

// Mean negative log-likelihood over n_samples posterior draws minus
// delta * posterior entropy.
double vase_surprise(const bnn::VariationalPosterior& post,
                     std::span<const double> s, std::span<const double> a,
                     std::span<const double> s_next, const SurpriseConfig& cfg,
                     numkit::Rng& rng);

// Monte-Carlo surprisal: -log of the sample-mean likelihood, max-shifted.
double nll_surprise(const bnn::VariationalPosterior& post,
                    std::span<const double> s, std::span<const double> a,
                    std::span<const double> s_next, const SurpriseConfig& cfg,
                    numkit::Rng& rng);

// KL from the pre-update belief to the post-update belief.
double bayes_surprise(const bnn::VariationalPosterior& pre_update,
                      const bnn::VariationalPosterior& post_update);

struct BayesScoreSettings {
  bnn::PriorSpec prior;
  double lr = 1e-3;
  double kl_weight = 1.0;
};

// VIME-style score: one Adam step of the bound on the single scored
// transition against a scratch copy, then the KL between beliefs.
double bayes_surprise_for_transition(const bnn::VariationalPosterior& snapshot,
                                     std::span<const double> s,
                                     std::span<const double> a,
                                     std::span<const double> s_next,
                                     const SurpriseConfig& cfg,
                                     const BayesScoreSettings& settings,
                                     numkit::Rng& rng);

// r_i = eta * u; mode none contributes nothing.
double intrinsic_reward(double u, const SurpriseConfig& cfg);

// Scores n transitions against one posterior snapshot. The per-transition
// rng stream is split from rng_root at (step_base + i), so the result does
// not depend on evaluation order or thread count. states/actions/next_states
// are flat row-major arrays.
std::vector<double> score_transitions(const bnn::VariationalPosterior& snapshot,
                                      std::span<const double> states,
                                      std::span<const double> actions,
                                      std::span<const double> next_states,
                                      std::size_t n, const SurpriseConfig& cfg,
                                      const numkit::Rng& rng_root,
                                      std::uint64_t step_base,
                                      const BayesScoreSettings* bayes_settings);

namespace serial {
std::vector<double> score_transitions(const bnn::VariationalPosterior& snapshot,
                                      std::span<const double> states,
                                      std::span<const double> actions,
                                      std::span<const double> next_states,
                                      std::size_t n, const SurpriseConfig& cfg,
                                      const numkit::Rng& rng_root,
                                      std::uint64_t step_base,
                                      const BayesScoreSettings* bayes_settings);
}  // namespace serial

}  // namespace vase::surprise
