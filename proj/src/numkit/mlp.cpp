#include "vase/numkit/mlp.hpp"

#include <cmath>

#include "vase/numkit/errors.hpp"

namespace vase::numkit {

namespace {

double activate(Activation a, double z) {
  return a == Activation::kRelu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

// Derivative expressed through the activation value, valid for both choices:
// relu' = 1{y > 0}, tanh' = 1 - y^2.
double activate_deriv(Activation a, double y) {
  return a == Activation::kRelu ? (y > 0.0 ? 1.0 : 0.0) : 1.0 - y * y;
}

}  // namespace

void MlpSpec::validate() const {
  require(layers.size() >= 2, "MlpSpec: need at least input and output layer");
  for (int n : layers) require(n >= 1, "MlpSpec: all layer sizes must be >= 1");
}

int MlpSpec::param_count() const {
  int total = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    total += layers[l] * layers[l + 1] + layers[l + 1];
  }
  return total;
}

std::vector<double> mlp_forward(const MlpSpec& spec,
                                std::span<const double> params,
                                std::span<const double> input) {
  spec.validate();
  check_length("mlp_forward params", params.size(),
                static_cast<std::size_t>(spec.param_count()));
  check_length("mlp_forward input", input.size(),
                static_cast<std::size_t>(spec.input_dim()));

  std::vector<double> act(input.begin(), input.end());
  std::size_t offset = 0;
  const std::size_t n_layers = spec.layers.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = spec.layers[l];
    const int out = spec.layers[l + 1];
    const double* w = params.data() + offset;
    const double* b = w + static_cast<std::size_t>(in) * out;
    std::vector<double> next(out);
    const bool last = (l + 1 == n_layers);
    for (int o = 0; o < out; ++o) {
      double z = b[o];
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) z += row[i] * act[i];
      next[o] = last ? z : activate(spec.hidden, z);
    }
    act = std::move(next);
    offset += static_cast<std::size_t>(in) * out + out;
  }
  ensure_finite(act, "mlp_forward");
  return act;
}

std::vector<double> mlp_gradient(const MlpSpec& spec,
                                 std::span<const double> params,
                                 std::span<const double> input,
                                 std::span<const double> output_grad) {
  spec.validate();
  check_length("mlp_gradient params", params.size(),
                static_cast<std::size_t>(spec.param_count()));
  check_length("mlp_gradient input", input.size(),
                static_cast<std::size_t>(spec.input_dim()));
  check_length("mlp_gradient output_grad", output_grad.size(),
                static_cast<std::size_t>(spec.output_dim()));

  const std::size_t n_layers = spec.layers.size() - 1;

  // Forward pass keeping every layer's activation.
  std::vector<std::vector<double>> acts(n_layers + 1);
  acts[0].assign(input.begin(), input.end());
  std::vector<std::size_t> offsets(n_layers);
  std::size_t offset = 0;
  for (std::size_t l = 0; l < n_layers; ++l) {
    offsets[l] = offset;
    const int in = spec.layers[l];
    const int out = spec.layers[l + 1];
    const double* w = params.data() + offset;
    const double* b = w + static_cast<std::size_t>(in) * out;
    acts[l + 1].resize(out);
    const bool last = (l + 1 == n_layers);
    for (int o = 0; o < out; ++o) {
      double z = b[o];
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) z += row[i] * acts[l][i];
      acts[l + 1][o] = last ? z : activate(spec.hidden, z);
    }
    offset += static_cast<std::size_t>(in) * out + out;
  }

  std::vector<double> grad(params.size(), 0.0);
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  for (std::size_t l = n_layers; l-- > 0;) {
    const int in = spec.layers[l];
    const int out = spec.layers[l + 1];
    const double* w = params.data() + offsets[l];
    double* gw = grad.data() + offsets[l];
    double* gb = gw + static_cast<std::size_t>(in) * out;
    std::vector<double> prev_delta(in, 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      gb[o] = d;
      double* grow = gw + static_cast<std::size_t>(o) * in;
      const double* wrow = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) {
        grow[i] = d * acts[l][i];
        prev_delta[i] += d * wrow[i];
      }
    }
    if (l > 0) {
      for (int i = 0; i < in; ++i) {
        prev_delta[i] *= activate_deriv(spec.hidden, acts[l][i]);
      }
      delta = std::move(prev_delta);
    }
  }
  ensure_finite(grad, "mlp_gradient");
  return grad;
}

std::vector<double> mlp_jvp(const MlpSpec& spec,
                            std::span<const double> params,
                            std::span<const double> input,
                            std::span<const double> param_tangent) {
  spec.validate();
  check_length("mlp_jvp params", params.size(),
                static_cast<std::size_t>(spec.param_count()));
  check_length("mlp_jvp tangent", param_tangent.size(), params.size());
  check_length("mlp_jvp input", input.size(),
                static_cast<std::size_t>(spec.input_dim()));

  std::vector<double> act(input.begin(), input.end());
  std::vector<double> act_dot(act.size(), 0.0);
  std::size_t offset = 0;
  const std::size_t n_layers = spec.layers.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = spec.layers[l];
    const int out = spec.layers[l + 1];
    const double* w = params.data() + offset;
    const double* b = w + static_cast<std::size_t>(in) * out;
    const double* wt = param_tangent.data() + offset;
    const double* bt = wt + static_cast<std::size_t>(in) * out;
    std::vector<double> next(out), next_dot(out);
    const bool last = (l + 1 == n_layers);
    for (int o = 0; o < out; ++o) {
      double z = b[o];
      double z_dot = bt[o];
      const double* wrow = w + static_cast<std::size_t>(o) * in;
      const double* trow = wt + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) {
        z += wrow[i] * act[i];
        z_dot += trow[i] * act[i] + wrow[i] * act_dot[i];
      }
      if (last) {
        next[o] = z;
        next_dot[o] = z_dot;
      } else {
        const double y = activate(spec.hidden, z);
        next[o] = y;
        next_dot[o] = activate_deriv(spec.hidden, y) * z_dot;
      }
    }
    act = std::move(next);
    act_dot = std::move(next_dot);
    offset += static_cast<std::size_t>(in) * out + out;
  }
  ensure_finite(act_dot, "mlp_jvp");
  return act_dot;
}

std::vector<double> mlp_init_params(const MlpSpec& spec, Rng& rng,
                                    double output_scale) {
  spec.validate();
  std::vector<double> params(spec.param_count());
  std::size_t offset = 0;
  const std::size_t n_layers = spec.layers.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = spec.layers[l];
    const int out = spec.layers[l + 1];
    const bool last = (l + 1 == n_layers);
    const double scale = (last ? output_scale : 1.0) / std::sqrt(static_cast<double>(in));
    for (int i = 0; i < in * out; ++i) params[offset + i] = scale * rng.normal();
    // biases start at zero
    offset += static_cast<std::size_t>(in) * out + out;
  }
  return params;
}

}  // namespace vase::numkit
