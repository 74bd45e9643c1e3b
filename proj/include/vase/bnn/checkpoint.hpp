#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "vase/bnn/posterior.hpp"

namespace vase::bnn {

struct PosteriorCheckpoint {
  VariationalPosterior posterior;
  PriorSpec prior;
  LikelihoodSpec likelihood;
};

// Versioned textual record; values round-trip bit-exactly (hex floats).
void save_posterior(std::ostream& os, const VariationalPosterior& post,
                    const PriorSpec& prior, const LikelihoodSpec& lik);
PosteriorCheckpoint load_posterior(std::istream& is);

void save_posterior_file(const std::string& path, const VariationalPosterior& post,
                         const PriorSpec& prior, const LikelihoodSpec& lik);
PosteriorCheckpoint load_posterior_file(const std::string& path);

}  // namespace vase::bnn
