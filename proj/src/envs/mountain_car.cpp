#include "vase/envs/mountain_car.hpp"

#include <algorithm>
#include <cmath>

#include "vase/numkit/errors.hpp"

namespace vase::envs {

MountainCarEnv::MountainCarEnv(int horizon) {
  spec_.id = EnvId::kMountainCar;
  spec_.state_dim = 2;
  spec_.action_dim = 1;
  spec_.action_low = {-1.0};
  spec_.action_high = {1.0};
  spec_.horizon = horizon;
  spec_.normalize = false;
}

std::vector<double> MountainCarEnv::reset(numkit::Rng& rng) {
  x_ = -0.5 + rng.uniform(-0.05, 0.05);
  v_ = 0.0;
  steps_ = 0;
  return {x_, v_};
}

StepResult MountainCarEnv::step(const std::vector<double>& action) {
  check_length("mountaincar action", action.size(), 1);
  const double a = std::clamp(action[0], -1.0, 1.0);
  v_ += kForce * a - kGravity * std::cos(3.0 * x_);
  v_ = std::clamp(v_, -kMaxSpeed, kMaxSpeed);
  x_ += v_;
  if (x_ < kMinPos) {
    x_ = kMinPos;
    v_ = 0.0;  // left wall absorbs momentum
  }
  x_ = std::min(x_, kMaxPos);
  ++steps_;

  StepResult result;
  result.observation = {x_, v_};
  const bool at_goal = x_ >= kGoalPos;
  result.reward_ext = at_goal ? 1.0 : 0.0;
  result.done = at_goal || steps_ >= spec_.horizon;
  result.info["position"] = x_;
  return result;
}

}  // namespace vase::envs
