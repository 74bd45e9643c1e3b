#pragma once

#include "vase/envs/env.hpp"

namespace vase::envs {

// Pole on a cart, starting hung down; reward 1 on every step with the pole
// near upright (cos(angle) > 0.9). Semi-implicit Euler at fixed dt.
class CartpoleSwingupEnv : public Env {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kCartMass = 0.5;
  static constexpr double kPoleMass = 0.5;
  static constexpr double kPoleHalfLength = 0.5;
  static constexpr double kForceMax = 10.0;
  static constexpr double kTrackLimit = 3.0;

  explicit CartpoleSwingupEnv(int horizon = 500, double dt = 0.02);

  const EnvSpec& spec() const override { return spec_; }
  std::vector<double> reset(numkit::Rng& rng) override;
  StepResult step(const std::vector<double>& action) override;
  int steps_elapsed() const override { return steps_; }

  // Total mechanical energy; conserved by the ideal unforced system.
  double total_energy() const;

  void set_state(double x, double beta, double x_dot, double beta_dot);

 private:
  EnvSpec spec_;
  double dt_;
  double x_ = 0.0, beta_ = 0.0, x_dot_ = 0.0, beta_dot_ = 0.0;
  int steps_ = 0;
};

}  // namespace vase::envs
