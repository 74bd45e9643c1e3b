#pragma once

#include "vase/envs/env.hpp"

namespace vase::envs {

// Point agent on a wrap-around square [-B, B)^2 with speed-capped velocity
// actions. Starts at the origin; reward 1 inside the goal disc.
class Plane2dEnv : public Env {
 public:
  static constexpr double kHalfWidth = 2.5;
  static constexpr double kSpeedCap = 0.01;

  explicit Plane2dEnv(int horizon = 500, double goal_x = 1.0, double goal_y = 1.0,
                      double goal_radius = 0.05);

  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset(numkit::Rng& rng) override;
  StepResult step(const std::vector<double>& action) override;
  int steps_elapsed() const override { return steps_; }

 private:
  EnvSpec spec_;
  double goal_x_, goal_y_, goal_radius_;
  double x_ = 0.0, y_ = 0.0;
  int steps_ = 0;
};

}  // namespace vase::envs
