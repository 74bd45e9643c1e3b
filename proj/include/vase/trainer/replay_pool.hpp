#pragma once

#include <vector>

#include "vase/bnn/posterior.hpp"
#include "vase/envs/normalizer.hpp"
#include "vase/numkit/rng.hpp"

namespace vase::trainer {

// One experience record. Observations are stored raw; normalization is
// applied when minibatches are drawn, so evolving normalizer statistics do
// not corrupt stored history.
struct Transition {
  std::vector<double> state;
  std::vector<double> action;  // clipped policy-space action
  std::vector<double> next_state;
  double r_ext = 0.0;
  double u = 0.0;        // surprise
  double r_total = 0.0;  // r_ext + eta * u
};

// Fixed-capacity FIFO ring buffer.
class ReplayPool {
 public:
  ReplayPool(std::size_t capacity, std::size_t min_size);

  void add(Transition t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool ready() const { return size_ >= min_size_; }
  std::size_t min_size() const { return min_size_; }

  // logical index 0 is the oldest stored transition
  const Transition& at(std::size_t i) const;

  // Uniform sample with replacement; observations pass through the
  // normalizer's current statistics when one is supplied.
  bnn::MiniBatch sample_minibatch(numkit::Rng& rng, std::size_t k,
                                  const envs::ObsNormalizer* normalizer) const;

 private:
  std::size_t capacity_;
  std::size_t min_size_;
  std::size_t head_ = 0;  // next write slot
  std::size_t size_ = 0;
  std::vector<Transition> buffer_;
};

}  // namespace vase::trainer
