#pragma once

#include "vase/envs/env.hpp"

namespace vase::envs {

// Two-link pendulum torqued at the first joint only; reward 1 while the tip
// is within kGoalDist of the point directly above the pivot at full
// extension. Angles are measured from upright, the second relative to the
// first link.
class DoublePendulumEnv : public Env {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kMass1 = 1.0;
  static constexpr double kMass2 = 1.0;
  static constexpr double kLength1 = 1.0;
  static constexpr double kLength2 = 1.0;
  static constexpr double kTorqueMax = 1.0;
  static constexpr double kGoalDist = 0.1;

  explicit DoublePendulumEnv(int horizon = 500, double dt = 0.02);

  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset(numkit::Rng& rng) override;
  StepResult step(const std::vector<double>& action) override;
  int steps_elapsed() const override { return steps_; }

  double total_energy() const;
  double tip_distance() const;
  void set_state(double b1, double b2, double b1_dot, double b2_dot);

 private:
  EnvSpec spec_;
  double dt_;
  double b1_ = 0.0, b2_ = 0.0, b1_dot_ = 0.0, b2_dot_ = 0.0;
  int steps_ = 0;
};

}  // namespace vase::envs
