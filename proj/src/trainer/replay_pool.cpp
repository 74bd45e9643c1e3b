#include "vase/trainer/replay_pool.hpp"

#include "vase/numkit/errors.hpp"

namespace vase::trainer {

ReplayPool::ReplayPool(std::size_t capacity, std::size_t min_size)
    : capacity_(capacity), min_size_(min_size) {
  require(capacity >= 1, "ReplayPool: capacity must be >= 1");
  require(min_size >= 1 && min_size <= capacity,
          "ReplayPool: min_size must be in [1, capacity]");
  buffer_.reserve(capacity);
}

void ReplayPool::add(Transition t) {
  if (size_ < capacity_) {
    buffer_.push_back(std::move(t));
    ++size_;
  } else {
    buffer_[head_] = std::move(t);  // overwrite the oldest
  }
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayPool::at(std::size_t i) const {
  require(i < size_, "ReplayPool::at: index out of range");
  if (size_ < capacity_) return buffer_[i];
  return buffer_[(head_ + i) % capacity_];
}

bnn::MiniBatch ReplayPool::sample_minibatch(numkit::Rng& rng, std::size_t k,
                                            const envs::ObsNormalizer* normalizer) const {
  require(ready(), "ReplayPool: below minimum size");
  require(k >= 1, "ReplayPool: minibatch size must be >= 1");

  const Transition& probe = at(0);
  bnn::MiniBatch batch;
  batch.count = k;
  batch.input_dim = probe.state.size() + probe.action.size();
  batch.target_dim = probe.next_state.size();
  batch.inputs.reserve(k * batch.input_dim);
  batch.targets.reserve(k * batch.target_dim);

  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t idx = rng.next_u64() % size_;
    const Transition& t = at(idx);
    const auto state = normalizer ? normalizer->apply(t.state) : t.state;
    const auto next = normalizer ? normalizer->apply(t.next_state) : t.next_state;
    batch.inputs.insert(batch.inputs.end(), state.begin(), state.end());
    batch.inputs.insert(batch.inputs.end(), t.action.begin(), t.action.end());
    batch.targets.insert(batch.targets.end(), next.begin(), next.end());
  }
  return batch;
}

}  // namespace vase::trainer
