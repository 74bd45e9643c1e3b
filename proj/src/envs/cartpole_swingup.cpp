#include "vase/envs/cartpole_swingup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vase/numkit/errors.hpp"

namespace vase::envs {

CartpoleSwingupEnv::CartpoleSwingupEnv(int horizon, double dt) : dt_(dt) {
  spec_.id = EnvId::kCartpoleSwingup;
  spec_.state_dim = 4;
  spec_.action_dim = 1;
  spec_.action_low = {-kForceMax};
  spec_.action_high = {kForceMax};
  spec_.horizon = horizon;
  spec_.normalize = true;
}

std::vector<double> CartpoleSwingupEnv::reset(numkit::Rng& rng) {
  x_ = rng.uniform(-0.05, 0.05);
  beta_ = std::numbers::pi + rng.uniform(-0.05, 0.05);  // hanging down
  x_dot_ = rng.uniform(-0.05, 0.05);
  beta_dot_ = rng.uniform(-0.05, 0.05);
  steps_ = 0;
  return {x_, beta_, x_dot_, beta_dot_};
}

void CartpoleSwingupEnv::set_state(double x, double beta, double x_dot,
                                   double beta_dot) {
  x_ = x;
  beta_ = beta;
  x_dot_ = x_dot;
  beta_dot_ = beta_dot;
}

StepResult CartpoleSwingupEnv::step(const std::vector<double>& action) {
  check_length("cartpole action", action.size(), 1);
  const double force = std::clamp(action[0], -kForceMax, kForceMax);

  // Pole-on-cart equations with the angle measured from upright and the
  // pole modelled as a uniform rod (the 4/3 factor).
  const double total_mass = kCartMass + kPoleMass;
  const double l = kPoleHalfLength;
  const double sin_b = std::sin(beta_);
  const double cos_b = std::cos(beta_);
  const double temp =
      (force + kPoleMass * l * beta_dot_ * beta_dot_ * sin_b) / total_mass;
  const double beta_acc =
      (kGravity * sin_b - cos_b * temp) /
      (l * (4.0 / 3.0 - kPoleMass * cos_b * cos_b / total_mass));
  const double x_acc = temp - kPoleMass * l * beta_acc * cos_b / total_mass;

  // semi-implicit Euler: velocities first, then positions
  x_dot_ += x_acc * dt_;
  beta_dot_ += beta_acc * dt_;
  x_ += x_dot_ * dt_;
  beta_ += beta_dot_ * dt_;
  ++steps_;

  StepResult result;
  result.observation = {x_, beta_, x_dot_, beta_dot_};
  result.reward_ext = std::cos(beta_) > 0.9 ? 1.0 : 0.0;
  const bool off_track = std::abs(x_) > kTrackLimit;
  result.done = off_track || steps_ >= spec_.horizon;
  result.info["energy"] = total_energy();
  return result;
}

double CartpoleSwingupEnv::total_energy() const {
  const double l = kPoleHalfLength;
  const double vx = x_dot_ + l * beta_dot_ * std::cos(beta_);
  const double vy = -l * beta_dot_ * std::sin(beta_);
  const double i_com = kPoleMass * l * l / 3.0;  // rod of length 2l about its centre
  const double kinetic = 0.5 * kCartMass * x_dot_ * x_dot_ +
                         0.5 * kPoleMass * (vx * vx + vy * vy) +
                         0.5 * i_com * beta_dot_ * beta_dot_;
  const double potential = kPoleMass * kGravity * l * std::cos(beta_);
  return kinetic + potential;
}

}  // namespace vase::envs
