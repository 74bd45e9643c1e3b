#pragma once

#include <span>
#include <vector>

namespace vase::numkit {

struct AdamMoments {
  std::vector<double> m;
  std::vector<double> v;

  explicit AdamMoments(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam descent step in place; t is the 1-based step count.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamMoments& moments, double lr, long t, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

}  // namespace vase::numkit
