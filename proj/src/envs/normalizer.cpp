#include "vase/envs/normalizer.hpp"

#include <algorithm>
#include <cmath>

#include "vase/numkit/errors.hpp"

namespace vase::envs {

ObsNormalizer::ObsNormalizer(std::size_t dim)
    : dim_(dim), mean_(dim, 0.0), m2_(dim, 0.0) {}

std::vector<double> ObsNormalizer::stddev() const {
  std::vector<double> sd(dim_, 0.0);
  if (count_ >= 2) {
    for (std::size_t i = 0; i < dim_; ++i) {
      sd[i] = std::sqrt(m2_[i] / static_cast<double>(count_ - 1));
    }
  }
  return sd;
}

std::vector<double> ObsNormalizer::apply(const std::vector<double>& obs) const {
  check_length("ObsNormalizer::apply", obs.size(), dim_);
  std::vector<double> out(dim_);
  const auto sd = stddev();
  const bool scale = count_ >= kVarianceWarmup;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double centred = obs[i] - mean_[i];
    out[i] = scale ? centred / std::max(sd[i], kSigmaFloor) : centred;
  }
  return out;
}

std::vector<double> ObsNormalizer::normalize(const std::vector<double>& obs) {
  check_length("ObsNormalizer::normalize", obs.size(), dim_);
  std::vector<double> out;
  if (count_ == 0) {
    // first-sample convention: mean initialised to the first observation
    out.assign(dim_, 0.0);
  } else {
    out = apply(obs);
  }
  ++count_;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double delta = obs[i] - mean_[i];
    mean_[i] += delta / static_cast<double>(count_);
    m2_[i] += delta * (obs[i] - mean_[i]);
  }
  return out;
}

}  // namespace vase::envs
