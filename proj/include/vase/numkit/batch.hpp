#pragma once

#include <span>
#include <vector>

#include "vase/numkit/mlp.hpp"

namespace vase::numkit {

// Batched forward pass: inputs is n rows of spec.input_dim(), outputs is
// filled with n rows of spec.output_dim(). OpenMP-parallel over rows; each
// row writes a disjoint slot, so the result is thread-count independent.
void mlp_forward_batch(const MlpSpec& spec, std::span<const double> params,
                       std::span<const double> inputs, std::size_t n,
                       std::span<double> outputs);

// Sum over rows of the per-row parameter gradient (output_grads holds n rows
// of spec.output_dim()). Rows are accumulated into fixed-size chunk partials
// that are reduced in chunk order, so the sum is bit-identical for any thread
// count, including the serial reference.
std::vector<double> mlp_gradient_batch(const MlpSpec& spec,
                                       std::span<const double> params,
                                       std::span<const double> inputs,
                                       std::span<const double> output_grads,
                                       std::size_t n);

// Serial reference implementations, kept for differential testing and the
// kernel benchmark.
namespace serial {

void mlp_forward_batch(const MlpSpec& spec, std::span<const double> params,
                       std::span<const double> inputs, std::size_t n,
                       std::span<double> outputs);

std::vector<double> mlp_gradient_batch(const MlpSpec& spec,
                                       std::span<const double> params,
                                       std::span<const double> inputs,
                                       std::span<const double> output_grads,
                                       std::size_t n);

}  // namespace serial

}  // namespace vase::numkit
