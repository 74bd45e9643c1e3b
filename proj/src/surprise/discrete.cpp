#include "vase/surprise/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vase/numkit/errors.hpp"

namespace vase::surprise {

void DiscreteBelief::validate() const {
  require(!hypotheses.empty(), "DiscreteBelief: no hypotheses");
  check_length("DiscreteBelief probs", probs.size(), hypotheses.size());
  double total = 0.0;
  for (double p : probs) {
    require(p >= 0.0, "DiscreteBelief: negative probability");
    total += p;
  }
  require(std::abs(total - 1.0) < 1e-12, "DiscreteBelief: probabilities must sum to 1");
}

AssortedTriple discrete_assorted_surprise(const DiscreteBelief& belief,
                                          std::span<const double> s,
                                          std::span<const double> a,
                                          std::span<const double> s_next,
                                          const bnn::LikelihoodSpec& lik) {
  belief.validate();
  const std::size_t m = belief.hypotheses.size();

  // Per-hypothesis log-likelihood of the observed next state.
  std::vector<double> ll(m, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m; ++i) {
    if (belief.probs[i] == 0.0) continue;
    const auto pred = belief.hypotheses[i](s, a);
    ll[i] = bnn::state_log_likelihood(pred, s_next, lik);
  }

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    if (belief.probs[i] > 0.0) shift = std::max(shift, ll[i]);
  }
  if (!std::isfinite(shift)) {
    throw NumericError("discrete_assorted_surprise: observation has zero "
                       "probability under every hypothesis");
  }

  // Marginal via max-shifted sum.
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (belief.probs[i] > 0.0) z += belief.probs[i] * std::exp(ll[i] - shift);
  }
  const double log_marginal = shift + std::log(z);

  AssortedTriple out{0.0, 0.0, -log_marginal};
  for (std::size_t i = 0; i < m; ++i) {
    const double p = belief.probs[i];
    if (p == 0.0) continue;
    out.assorted -= p * ll[i];
    // Bayes posterior; the normalized value is used directly unless it
    // underflows, in which case its log is assembled in log space.
    const double posterior = p * std::exp(ll[i] - shift) / z;
    const double log_posterior = posterior > 1e-290
                                     ? std::log(posterior)
                                     : std::log(p) + ll[i] - log_marginal;
    out.bayes += p * (std::log(p) - log_posterior);
  }
  ensure_finite(out.assorted, "discrete_assorted_surprise assorted");
  ensure_finite(out.bayes, "discrete_assorted_surprise bayes");
  ensure_finite(out.nll, "discrete_assorted_surprise nll");
  return out;
}

}  // namespace vase::surprise
