#include "vase/numkit/batch.hpp"

#include <cstddef>

#include "vase/numkit/errors.hpp"

namespace vase::numkit {

namespace {

// Rows per reduction chunk for gradient accumulation. Fixed (not derived from
// the thread count) so sums are reproducible under any schedule.
constexpr std::size_t kChunk = 64;

void check_batch_args(const char* what, const MlpSpec& spec,
                      std::span<const double> params,
                      std::span<const double> inputs, std::size_t n) {
  spec.validate();
  check_length(what, params.size(), static_cast<std::size_t>(spec.param_count()));
  check_length(what, inputs.size(), n * static_cast<std::size_t>(spec.input_dim()));
}

}  // namespace

void mlp_forward_batch(const MlpSpec& spec, std::span<const double> params,
                       std::span<const double> inputs, std::size_t n,
                       std::span<double> outputs) {
  check_batch_args("mlp_forward_batch", spec, params, inputs, n);
  const std::size_t in_dim = spec.input_dim();
  const std::size_t out_dim = spec.output_dim();
  check_length("mlp_forward_batch outputs", outputs.size(), n * out_dim);

  ParallelExceptionGuard guard;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n); ++r) {
    guard.run([&] {
      const auto row = mlp_forward(spec, params, inputs.subspan(r * in_dim, in_dim));
      for (std::size_t j = 0; j < out_dim; ++j) outputs[r * out_dim + j] = row[j];
    });
  }
  guard.rethrow();
}

std::vector<double> mlp_gradient_batch(const MlpSpec& spec,
                                       std::span<const double> params,
                                       std::span<const double> inputs,
                                       std::span<const double> output_grads,
                                       std::size_t n) {
  check_batch_args("mlp_gradient_batch", spec, params, inputs, n);
  const std::size_t in_dim = spec.input_dim();
  const std::size_t out_dim = spec.output_dim();
  check_length("mlp_gradient_batch output_grads", output_grads.size(), n * out_dim);

  const std::size_t n_params = params.size();
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partials(n_chunks * n_params, 0.0);

  ParallelExceptionGuard guard;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
    guard.run([&] {
      double* acc = partials.data() + c * n_params;
      const std::size_t lo = c * kChunk;
      const std::size_t hi = std::min(lo + kChunk, n);
      for (std::size_t r = lo; r < hi; ++r) {
        const auto g = mlp_gradient(spec, params, inputs.subspan(r * in_dim, in_dim),
                                    output_grads.subspan(r * out_dim, out_dim));
        for (std::size_t k = 0; k < n_params; ++k) acc[k] += g[k];
      }
    });
  }
  guard.rethrow();

  std::vector<double> total(n_params, 0.0);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    const double* acc = partials.data() + c * n_params;
    for (std::size_t k = 0; k < n_params; ++k) total[k] += acc[k];
  }
  ensure_finite(total, "mlp_gradient_batch");
  return total;
}

namespace serial {

void mlp_forward_batch(const MlpSpec& spec, std::span<const double> params,
                       std::span<const double> inputs, std::size_t n,
                       std::span<double> outputs) {
  check_batch_args("mlp_forward_batch", spec, params, inputs, n);
  const std::size_t in_dim = spec.input_dim();
  const std::size_t out_dim = spec.output_dim();
  check_length("mlp_forward_batch outputs", outputs.size(), n * out_dim);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = mlp_forward(spec, params, inputs.subspan(r * in_dim, in_dim));
    for (std::size_t j = 0; j < out_dim; ++j) outputs[r * out_dim + j] = row[j];
  }
}

std::vector<double> mlp_gradient_batch(const MlpSpec& spec,
                                       std::span<const double> params,
                                       std::span<const double> inputs,
                                       std::span<const double> output_grads,
                                       std::size_t n) {
  check_batch_args("mlp_gradient_batch", spec, params, inputs, n);
  const std::size_t in_dim = spec.input_dim();
  const std::size_t out_dim = spec.output_dim();
  check_length("mlp_gradient_batch output_grads", output_grads.size(), n * out_dim);

  const std::size_t n_params = params.size();
  std::vector<double> total(n_params, 0.0);
  // Same chunked summation order as the parallel kernel.
  std::vector<double> acc(n_params);
  for (std::size_t lo = 0; lo < n; lo += kChunk) {
    const std::size_t hi = std::min(lo + kChunk, n);
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t r = lo; r < hi; ++r) {
      const auto g = mlp_gradient(spec, params, inputs.subspan(r * in_dim, in_dim),
                                  output_grads.subspan(r * out_dim, out_dim));
      for (std::size_t k = 0; k < n_params; ++k) acc[k] += g[k];
    }
    for (std::size_t k = 0; k < n_params; ++k) total[k] += acc[k];
  }
  ensure_finite(total, "mlp_gradient_batch");
  return total;
}

}  // namespace serial

}  // namespace vase::numkit
