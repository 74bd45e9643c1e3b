#pragma once

#include "vase/envs/env.hpp"

namespace vase::envs {

// Continuous-action hill climb; reward 1 only at the right-hand goal.
class MountainCarEnv : public Env {
 public:
  static constexpr double kForce = 0.0015;
  static constexpr double kGravity = 0.0025;
  static constexpr double kMaxSpeed = 0.07;
  static constexpr double kMinPos = -1.2;
  static constexpr double kMaxPos = 0.6;
  static constexpr double kGoalPos = 0.45;

  explicit MountainCarEnv(int horizon = 500);

  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset(numkit::Rng& rng) override;
  StepResult step(const std::vector<double>& action) override;
  int steps_elapsed() const override { return steps_; }

  void set_state(double x, double v) {
    x_ = x;
    v_ = v;
  }

 private:
  EnvSpec spec_;
  double x_ = -0.5, v_ = 0.0;
  int steps_ = 0;
};

}  // namespace vase::envs
