#include "vase/policy/trpo.hpp"

#include <cmath>
#include <numbers>

#include "vase/numkit/batch.hpp"
#include "vase/numkit/errors.hpp"

namespace vase::policy {

void TrpoConfig::validate() const {
  require(max_kl > 0.0, "TrpoConfig: max_kl must be positive");
  require(cg_iters >= 1, "TrpoConfig: cg_iters must be >= 1");
  require(cg_damping >= 0.0, "TrpoConfig: cg_damping must be >= 0");
  require(backtracks >= 1, "TrpoConfig: backtracks must be >= 1");
  require(gamma > 0.0 && gamma <= 1.0, "TrpoConfig: gamma must be in (0, 1]");
  require(gae_lambda >= 0.0 && gae_lambda <= 1.0,
          "TrpoConfig: gae_lambda must be in [0, 1]");
}

namespace {

struct Unpacked {
  std::span<const double> params;
  std::span<const double> log_std;
};

Unpacked split(const GaussianPolicy& pol, std::span<const double> packed) {
  check_length("trpo packed parameters", packed.size(),
                pol.params.size() + pol.log_std.size());
  return {packed.subspan(0, pol.params.size()), packed.subspan(pol.params.size())};
}

// means of the candidate policy for every batch observation, n x action_dim
std::vector<double> batch_means(const GaussianPolicy& pol,
                                const TrajectoryBatch& batch,
                                std::span<const double> params) {
  const std::size_t n = batch.size();
  std::vector<double> means(n * batch.action_dim);
  numkit::mlp_forward_batch(pol.spec, params, batch.observations, n, means);
  return means;
}

}  // namespace

double surrogate(const GaussianPolicy& pol, const TrajectoryBatch& batch,
                 std::span<const double> packed_candidate) {
  batch.validate();
  check_length("surrogate advantages", batch.advantages.size(), batch.size());
  const auto [params, log_std] = split(pol, packed_candidate);
  const auto means = batch_means(pol, batch, params);
  const std::size_t n = batch.size();
  const std::size_t ad = batch.action_dim;

  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double lp = 0.0;
    for (std::size_t j = 0; j < ad; ++j) {
      const double ls = log_std[j];
      const double z = (batch.actions[t * ad + j] - means[t * ad + j]) * std::exp(-ls);
      lp += -0.5 * z * z - ls - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    acc += std::exp(lp - batch.log_probs[t]) * batch.advantages[t];
  }
  return acc / static_cast<double>(n);
}

std::vector<double> surrogate_gradient(const GaussianPolicy& pol,
                                       const TrajectoryBatch& batch) {
  batch.validate();
  pol.validate();
  check_length("surrogate advantages", batch.advantages.size(), batch.size());
  const std::size_t n = batch.size();
  const std::size_t ad = batch.action_dim;
  const auto means = batch_means(pol, batch, pol.params);

  // d surrogate / d mean_j = adv * (a_j - mean_j) / sigma_j^2 at ratio = 1
  std::vector<double> output_grads(n * ad);
  std::vector<double> g_log_std(ad, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < ad; ++j) {
      const double inv_var = std::exp(-2.0 * pol.log_std[j]);
      const double diff = batch.actions[t * ad + j] - means[t * ad + j];
      output_grads[t * ad + j] = batch.advantages[t] * diff * inv_var * inv_n;
      g_log_std[j] +=
          batch.advantages[t] * (diff * diff * inv_var - 1.0) * inv_n;
    }
  }
  auto grad = numkit::mlp_gradient_batch(pol.spec, pol.params,
                                         batch.observations, output_grads, n);
  grad.insert(grad.end(), g_log_std.begin(), g_log_std.end());
  return grad;
}

double mean_kl(const GaussianPolicy& pol, const TrajectoryBatch& batch,
               std::span<const double> packed_candidate) {
  const auto [params, log_std] = split(pol, packed_candidate);
  const auto old_means = batch_means(pol, batch, pol.params);
  const auto new_means = batch_means(pol, batch, params);
  const std::size_t n = batch.size();
  const std::size_t ad = batch.action_dim;

  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < ad; ++j) {
      const double so = std::exp(pol.log_std[j]);
      const double sn = std::exp(log_std[j]);
      const double dm = old_means[t * ad + j] - new_means[t * ad + j];
      acc += log_std[j] - pol.log_std[j] +
             (so * so + dm * dm) / (2.0 * sn * sn) - 0.5;
    }
  }
  return acc / static_cast<double>(n);
}

std::vector<double> fisher_vector_product(const GaussianPolicy& pol,
                                          const TrajectoryBatch& batch,
                                          std::span<const double> v,
                                          double damping) {
  pol.validate();
  const auto [v_params, v_log_std] = split(pol, v);
  const std::size_t n = batch.size();
  const std::size_t ad = batch.action_dim;

  // Gauss-Newton form of the mean-KL Hessian: J^T diag(1/sigma^2) J per
  // observation for the mean block, a constant 2 per log-std coordinate.
  std::vector<double> output_grads(n * ad);
  const double inv_n = 1.0 / static_cast<double>(n);
  ParallelExceptionGuard guard;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
    guard.run([&, t] {
      const auto jv = numkit::mlp_jvp(
          pol.spec, pol.params,
          std::span(batch.observations).subspan(t * batch.obs_dim, batch.obs_dim),
          v_params);
      for (std::size_t j = 0; j < ad; ++j) {
        const double inv_var = std::exp(-2.0 * pol.log_std[j]);
        output_grads[t * ad + j] = jv[j] * inv_var * inv_n;
      }
    });
  }
  guard.rethrow();
  auto result = numkit::mlp_gradient_batch(pol.spec, pol.params,
                                           batch.observations, output_grads, n);
  result.reserve(v.size());
  for (std::size_t j = 0; j < ad; ++j) result.push_back(2.0 * v_log_std[j]);
  for (std::size_t i = 0; i < v.size(); ++i) result[i] += damping * v[i];
  return result;
}

std::vector<double> conjugate_gradient(
    const std::function<std::vector<double>(std::span<const double>)>& matvec,
    std::span<const double> b, int iters, double tol) {
  std::vector<double> x(b.size(), 0.0);
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> p(r);
  double rs = 0.0;
  for (double v : r) rs += v * v;
  for (int it = 0; it < iters && rs > tol * tol; ++it) {
    const auto ap = matvec(p);
    double p_ap = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) p_ap += p[i] * ap[i];
    if (p_ap <= 0.0) break;  // non-positive curvature; stop with current x
    const double alpha = rs / p_ap;
    double rs_new = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rs_new += r[i] * r[i];
    }
    const double beta = rs_new / rs;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    rs = rs_new;
  }
  return x;
}

TrpoDiagnostics trpo_update(GaussianPolicy& pol, const TrajectoryBatch& batch,
                            const TrpoConfig& cfg) {
  cfg.validate();
  batch.validate();
  pol.validate();
  require(!batch.advantages.empty(), "trpo_update: advantages not computed");

  TrpoDiagnostics diag;
  const auto grad = surrogate_gradient(pol, batch);
  double gnorm = 0.0;
  for (double g : grad) gnorm += g * g;
  gnorm = std::sqrt(gnorm);
  diag.grad_norm = gnorm;
  for (double g : grad) {
    if (!std::isfinite(g)) {
      throw NumericError("trpo_update: non-finite policy gradient");
    }
  }
  if (gnorm < 1e-12) return diag;  // nothing to do; policy unchanged

  auto fvp = [&](std::span<const double> v) {
    return fisher_vector_product(pol, batch, v, cfg.cg_damping);
  };
  const auto step_dir = conjugate_gradient(fvp, grad, cfg.cg_iters);

  const auto f_step = fvp(step_dir);
  double shs = 0.0;
  for (std::size_t i = 0; i < step_dir.size(); ++i) shs += step_dir[i] * f_step[i];
  if (shs <= 0.0 || !std::isfinite(shs)) return diag;
  const double full_scale = std::sqrt(2.0 * cfg.max_kl / shs);

  const auto old_packed = pol.packed();
  const double l_old = surrogate(pol, batch, old_packed);

  std::vector<double> candidate(old_packed.size());
  double scale = full_scale;
  for (int k = 0; k < cfg.backtracks; ++k, scale *= 0.5) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      candidate[i] = old_packed[i] + scale * step_dir[i];
    }
    const double l_new = surrogate(pol, batch, candidate);
    const double kl = mean_kl(pol, batch, candidate);
    const double improvement = l_new - l_old;
    if (std::isfinite(l_new) && std::isfinite(kl) && improvement >= 0.0 &&
        kl <= cfg.max_kl) {
      pol.unpack(candidate);
      diag.accepted = true;
      diag.surrogate_improvement = improvement;
      diag.kl = kl;
      diag.step_scale = scale / full_scale;
      diag.backtrack_index = k;
      return diag;
    }
  }
  return diag;  // no acceptable step; policy unchanged
}

}  // namespace vase::policy
