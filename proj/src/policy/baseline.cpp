#include "vase/policy/baseline.hpp"

#include <cmath>

#include "vase/numkit/adam.hpp"
#include "vase/numkit/batch.hpp"
#include "vase/numkit/errors.hpp"

namespace vase::policy {

ValueNet init_value_net(int input_dim, int hidden, numkit::Rng& rng) {
  ValueNet net;
  net.spec.layers = {input_dim, hidden, 1};
  net.spec.hidden = numkit::Activation::kRelu;
  net.params = numkit::mlp_init_params(net.spec, rng, 0.01);
  return net;
}

std::vector<double> predict_values(const ValueNet& net,
                                   const std::vector<double>& inputs,
                                   std::size_t n) {
  std::vector<double> out(n);
  numkit::mlp_forward_batch(net.spec, net.params, inputs, n, out);
  return out;
}

double explained_variance(const std::vector<double>& predictions,
                          const std::vector<double>& targets) {
  check_length("explained_variance", predictions.size(), targets.size());
  require(!targets.empty(), "explained_variance: empty input");
  double mean_t = 0.0;
  for (double t : targets) mean_t += t;
  mean_t /= static_cast<double>(targets.size());
  double var_t = 0.0, var_r = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    var_t += (targets[i] - mean_t) * (targets[i] - mean_t);
    const double r = targets[i] - predictions[i];
    var_r += r * r;
  }
  var_t /= static_cast<double>(targets.size());
  var_r /= static_cast<double>(targets.size());
  if (var_t < 1e-12) return var_r < 1e-12 ? 1.0 : 0.0;
  return 1.0 - var_r / var_t;
}

BaselineFit fit_baseline(ValueNet& net, const std::vector<double>& inputs,
                         std::size_t n, const std::vector<double>& targets,
                         double lr, int steps) {
  check_length("fit_baseline targets", targets.size(), n);
  require(n >= 1, "fit_baseline: empty batch");
  require(steps >= 0, "fit_baseline: steps must be >= 0");

  BaselineFit fit;
  fit.explained_variance_before =
      explained_variance(predict_values(net, inputs, n), targets);

  numkit::AdamMoments moments(net.params.size());
  std::vector<double> output_grads(n);
  const double scale = 2.0 / static_cast<double>(n);
  for (int step = 1; step <= steps; ++step) {
    const auto preds = predict_values(net, inputs, n);
    for (std::size_t i = 0; i < n; ++i) {
      output_grads[i] = scale * (preds[i] - targets[i]);
    }
    const auto grad =
        numkit::mlp_gradient_batch(net.spec, net.params, inputs, output_grads, n);
    numkit::adam_step(net.params, grad, moments, lr, step);
  }

  const auto preds = predict_values(net, inputs, n);
  fit.explained_variance_after = explained_variance(preds, targets);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = preds[i] - targets[i];
    loss += d * d;
  }
  fit.final_loss = loss / static_cast<double>(n);
  return fit;
}

}  // namespace vase::policy
