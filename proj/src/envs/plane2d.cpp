#include "vase/envs/plane2d.hpp"

#include <algorithm>
#include <cmath>

#include "vase/numkit/errors.hpp"

namespace vase::envs {

namespace {

// Wrap into [-B, B).
double wrap(double v, double b) {
  const double period = 2.0 * b;
  double w = std::fmod(v + b, period);
  if (w < 0.0) w += period;
  return w - b;
}

}  // namespace

Plane2dEnv::Plane2dEnv(int horizon, double goal_x, double goal_y, double goal_radius)
    : goal_x_(goal_x), goal_y_(goal_y), goal_radius_(goal_radius) {
  spec_.id = EnvId::kPlane2d;
  spec_.state_dim = 2;
  spec_.action_dim = 2;
  spec_.action_low = {-kSpeedCap, -kSpeedCap};
  spec_.action_high = {kSpeedCap, kSpeedCap};
  spec_.horizon = horizon;
  spec_.normalize = false;
}

std::vector<double> Plane2dEnv::reset(numkit::Rng&) {
  x_ = 0.0;
  y_ = 0.0;
  steps_ = 0;
  return {x_, y_};
}

StepResult Plane2dEnv::step(const std::vector<double>& action) {
  check_length("plane2d action", action.size(), 2);
  const double dx = std::clamp(action[0], -kSpeedCap, kSpeedCap);
  const double dy = std::clamp(action[1], -kSpeedCap, kSpeedCap);
  x_ = wrap(x_ + dx, kHalfWidth);
  y_ = wrap(y_ + dy, kHalfWidth);
  ++steps_;

  StepResult result;
  result.observation = {x_, y_};
  const double dist = std::hypot(x_ - goal_x_, y_ - goal_y_);
  const bool at_goal = dist < goal_radius_;
  result.reward_ext = at_goal ? 1.0 : 0.0;
  result.done = at_goal || steps_ >= spec_.horizon;
  result.info["dist_to_goal"] = dist;
  return result;
}

}  // namespace vase::envs
