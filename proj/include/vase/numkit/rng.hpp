#pragma once

#include <cstdint>
#include <vector>

namespace vase::numkit {

// Counter-based pseudo-random generator (splitmix64 core). The whole state is
// (seed, counter), so identical seeds and call sequences reproduce the same
// stream on any platform. split() derives an independent stream from the seed
// alone, independent of how many values the parent has produced.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal();

  Rng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// n standard-normal draws; n >= 1.
std::vector<double> gaussian_sample(Rng& rng, std::size_t n);

}  // namespace vase::numkit
