#include "vase/numkit/adam.hpp"

#include <cmath>

#include "vase/numkit/errors.hpp"

namespace vase::numkit {

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamMoments& moments, double lr, long t, double beta1,
               double beta2, double eps) {
  check_length("adam_step grads", grads.size(), params.size());
  require(t >= 1, "adam_step: t must be >= 1");
  if (moments.m.empty()) {
    moments.m.assign(params.size(), 0.0);
    moments.v.assign(params.size(), 0.0);
  }
  check_length("adam_step moments", moments.m.size(), params.size());

  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    moments.m[i] = beta1 * moments.m[i] + (1.0 - beta1) * grads[i];
    moments.v[i] = beta2 * moments.v[i] + (1.0 - beta2) * grads[i] * grads[i];
    const double m_hat = moments.m[i] / c1;
    const double v_hat = moments.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
  ensure_finite(params, "adam_step");
}

}  // namespace vase::numkit
