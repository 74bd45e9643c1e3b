#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vase/bnn/posterior.hpp"

namespace vase::surprise {

// Finite set of deterministic next-state predictors with a belief over them.
struct DiscreteBelief {
  using Hypothesis =
      std::function<std::vector<double>(std::span<const double> s,
                                        std::span<const double> a)>;
  std::vector<Hypothesis> hypotheses;
  std::vector<double> probs;

  void validate() const;  // probs >= 0 and sum to 1 within 1e-12
};

struct AssortedTriple {
  double assorted;  // E_M[-log P(s'|s,a,M)]
  double bayes;     // KL(prior belief || Bayes posterior)
  double nll;       // -log sum_M P(M) P(s'|M)
};

// Exact enumeration of all three surprise quantities. The per-hypothesis
// likelihood is the Gaussian state likelihood evaluated at the hypothesis's
// deterministic prediction. Throws if the observation has zero probability
// under every hypothesis.
AssortedTriple discrete_assorted_surprise(const DiscreteBelief& belief,
                                          std::span<const double> s,
                                          std::span<const double> a,
                                          std::span<const double> s_next,
                                          const bnn::LikelihoodSpec& lik);

}  // namespace vase::surprise
