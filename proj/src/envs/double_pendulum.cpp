#include "vase/envs/double_pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vase/numkit/errors.hpp"

namespace vase::envs {

namespace {
// centres of mass and rod inertias for uniform links
constexpr double kLc1 = DoublePendulumEnv::kLength1 / 2.0;
constexpr double kLc2 = DoublePendulumEnv::kLength2 / 2.0;
constexpr double kI1 =
    DoublePendulumEnv::kMass1 * DoublePendulumEnv::kLength1 * DoublePendulumEnv::kLength1 / 12.0;
constexpr double kI2 =
    DoublePendulumEnv::kMass2 * DoublePendulumEnv::kLength2 * DoublePendulumEnv::kLength2 / 12.0;
}  // namespace

DoublePendulumEnv::DoublePendulumEnv(int horizon, double dt) : dt_(dt) {
  spec_.id = EnvId::kDoublePendulum;
  spec_.state_dim = 4;
  spec_.action_dim = 1;
  spec_.action_low = {-kTorqueMax};
  spec_.action_high = {kTorqueMax};
  spec_.horizon = horizon;
  spec_.normalize = true;
}

std::vector<double> DoublePendulumEnv::reset(numkit::Rng& rng) {
  b1_ = std::numbers::pi + rng.uniform(-0.05, 0.05);  // hanging down
  b2_ = rng.uniform(-0.05, 0.05);
  b1_dot_ = rng.uniform(-0.05, 0.05);
  b2_dot_ = rng.uniform(-0.05, 0.05);
  steps_ = 0;
  return {b1_, b2_, b1_dot_, b2_dot_};
}

void DoublePendulumEnv::set_state(double b1, double b2, double b1_dot, double b2_dot) {
  b1_ = b1;
  b2_ = b2;
  b1_dot_ = b1_dot;
  b2_dot_ = b2_dot;
}

double DoublePendulumEnv::tip_distance() const {
  const double tip_x = kLength1 * std::sin(b1_) + kLength2 * std::sin(b1_ + b2_);
  const double tip_y = kLength1 * std::cos(b1_) + kLength2 * std::cos(b1_ + b2_);
  return std::hypot(tip_x - 0.0, tip_y - (kLength1 + kLength2));
}

StepResult DoublePendulumEnv::step(const std::vector<double>& action) {
  check_length("double_pendulum action", action.size(), 1);
  const double torque = std::clamp(action[0], -kTorqueMax, kTorqueMax);

  // Manipulator-form dynamics of the two-link chain.
  const double c2 = std::cos(b2_);
  const double s2 = std::sin(b2_);
  const double d11 = kMass1 * kLc1 * kLc1 +
                     kMass2 * (kLength1 * kLength1 + kLc2 * kLc2 +
                               2.0 * kLength1 * kLc2 * c2) +
                     kI1 + kI2;
  const double d12 = kMass2 * (kLc2 * kLc2 + kLength1 * kLc2 * c2) + kI2;
  const double d22 = kMass2 * kLc2 * kLc2 + kI2;

  const double h = kMass2 * kLength1 * kLc2 * s2;
  const double cor1 = -h * (2.0 * b1_dot_ * b2_dot_ + b2_dot_ * b2_dot_);
  const double cor2 = h * b1_dot_ * b1_dot_;

  // gravity torques with angles measured from upright
  const double g1 = -kGravity * ((kMass1 * kLc1 + kMass2 * kLength1) * std::sin(b1_) +
                                 kMass2 * kLc2 * std::sin(b1_ + b2_));
  const double g2 = -kGravity * kMass2 * kLc2 * std::sin(b1_ + b2_);

  const double rhs1 = torque - cor1 - g1;
  const double rhs2 = -cor2 - g2;
  const double det = d11 * d22 - d12 * d12;
  const double b1_acc = (d22 * rhs1 - d12 * rhs2) / det;
  const double b2_acc = (d11 * rhs2 - d12 * rhs1) / det;

  b1_dot_ += b1_acc * dt_;
  b2_dot_ += b2_acc * dt_;
  b1_ += b1_dot_ * dt_;
  b2_ += b2_dot_ * dt_;
  ++steps_;

  StepResult result;
  result.observation = {b1_, b2_, b1_dot_, b2_dot_};
  const double dist = tip_distance();
  result.reward_ext = dist < kGoalDist ? 1.0 : 0.0;
  result.done = steps_ >= spec_.horizon;
  result.info["tip_distance"] = dist;
  result.info["energy"] = total_energy();
  return result;
}

double DoublePendulumEnv::total_energy() const {
  const double c2 = std::cos(b2_);
  const double d11 = kMass1 * kLc1 * kLc1 +
                     kMass2 * (kLength1 * kLength1 + kLc2 * kLc2 +
                               2.0 * kLength1 * kLc2 * c2) +
                     kI1 + kI2;
  const double d12 = kMass2 * (kLc2 * kLc2 + kLength1 * kLc2 * c2) + kI2;
  const double d22 = kMass2 * kLc2 * kLc2 + kI2;
  const double kinetic = 0.5 * (d11 * b1_dot_ * b1_dot_ +
                                2.0 * d12 * b1_dot_ * b2_dot_ +
                                d22 * b2_dot_ * b2_dot_);
  const double potential =
      kGravity * ((kMass1 * kLc1 + kMass2 * kLength1) * std::cos(b1_) +
                  kMass2 * kLc2 * std::cos(b1_ + b2_));
  return kinetic + potential;
}

}  // namespace vase::envs
