#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vase/policy/gae.hpp"
#include "vase/policy/gaussian_policy.hpp"

namespace vase::policy {

struct TrpoConfig {
  double max_kl = 0.01;
  int cg_iters = 10;
  double cg_damping = 0.1;
  int backtracks = 10;
  double gamma = 0.99;
  double gae_lambda = 0.97;

  void validate() const;
};

struct TrpoDiagnostics {
  bool accepted = false;
  double surrogate_improvement = 0.0;
  double kl = 0.0;          // measured mean KL(old || new) of the accepted step
  double grad_norm = 0.0;
  double step_scale = 0.0;  // backtracking factor applied to the full step
  int backtrack_index = -1;
};

// Importance-ratio surrogate E[ratio * advantage] of the candidate joint
// parameter vector, with old log-probs taken from the batch.
double surrogate(const GaussianPolicy& pol, const TrajectoryBatch& batch,
                 std::span<const double> packed_candidate);

// Gradient of the surrogate at the current policy (joint packed layout).
std::vector<double> surrogate_gradient(const GaussianPolicy& pol,
                                       const TrajectoryBatch& batch);

// Mean KL(old || candidate) over batch observations.
double mean_kl(const GaussianPolicy& pol, const TrajectoryBatch& batch,
               std::span<const double> packed_candidate);

// Damped Fisher-vector product of the mean-KL Hessian at the current policy.
std::vector<double> fisher_vector_product(const GaussianPolicy& pol,
                                          const TrajectoryBatch& batch,
                                          std::span<const double> v,
                                          double damping);

std::vector<double> conjugate_gradient(
    const std::function<std::vector<double>(std::span<const double>)>& matvec,
    std::span<const double> b, int iters, double tol = 1e-10);

// Natural-gradient step with backtracking line search. Accepts the first
// candidate with non-negative surrogate improvement and measured KL within
// max_kl; otherwise the policy is left unchanged.
TrpoDiagnostics trpo_update(GaussianPolicy& pol, const TrajectoryBatch& batch,
                            const TrpoConfig& cfg);

}  // namespace vase::policy
