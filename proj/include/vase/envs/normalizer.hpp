#pragma once

#include <vector>

namespace vase::envs {

// Running observation normalizer (Welford moments). normalize() scales with
// the statistics accumulated BEFORE the incoming observation, then folds it
// in. The mean is initialised to the first sample, and variance scaling only
// engages once kVarianceWarmup samples have been seen; before that the
// output is centred but unscaled, which keeps early outputs bounded.
class ObsNormalizer {
 public:
  static constexpr std::size_t kVarianceWarmup = 8;
  static constexpr double kSigmaFloor = 1e-8;

  ObsNormalizer() = default;
  explicit ObsNormalizer(std::size_t dim);

  std::vector<double> normalize(const std::vector<double>& obs);

  // Scale with current statistics without updating them.
  std::vector<double> apply(const std::vector<double>& obs) const;

  std::size_t count() const { return count_; }
  const std::vector<double>& mean() const { return mean_; }
  std::vector<double> stddev() const;

 private:
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

}  // namespace vase::envs
