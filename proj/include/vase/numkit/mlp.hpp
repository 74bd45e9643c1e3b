#pragma once

#include <span>
#include <vector>

#include "vase/numkit/rng.hpp"

namespace vase::numkit {

enum class Activation { kRelu, kTanh };

// Feed-forward network shape. Parameters live in one flat vector, laid out
// layer by layer: weights (out x in, row-major) then biases (out).
struct MlpSpec {
  std::vector<int> layers;  // input, hidden..., output sizes
  Activation hidden = Activation::kRelu;

  void validate() const;
  int param_count() const;
  int input_dim() const { return layers.front(); }
  int output_dim() const { return layers.back(); }
  bool operator==(const MlpSpec&) const = default;
};

std::vector<double> mlp_forward(const MlpSpec& spec,
                                std::span<const double> params,
                                std::span<const double> input);

// Gradient of output . output_grad with respect to the flat parameter vector
// (reverse mode, one backward pass).
std::vector<double> mlp_gradient(const MlpSpec& spec,
                                 std::span<const double> params,
                                 std::span<const double> input,
                                 std::span<const double> output_grad);

// Directional derivative of the output along a parameter tangent
// (forward mode); used for Fisher-vector products.
std::vector<double> mlp_jvp(const MlpSpec& spec,
                            std::span<const double> params,
                            std::span<const double> input,
                            std::span<const double> param_tangent);

// Fan-in scaled Gaussian init; the final layer is additionally scaled by
// output_scale so near-zero initial outputs are available where wanted.
std::vector<double> mlp_init_params(const MlpSpec& spec, Rng& rng,
                                    double output_scale = 1.0);

}  // namespace vase::numkit
