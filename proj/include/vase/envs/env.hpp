#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vase/numkit/rng.hpp"

namespace vase::envs {

enum class EnvId { kPlane2d, kMountainCar, kCartpoleSwingup, kDoublePendulum };

EnvId parse_env_id(const std::string& name);
std::string env_name(EnvId id);

struct EnvSpec {
  EnvId id = EnvId::kPlane2d;
  int state_dim = 0;
  int action_dim = 0;
  std::vector<double> action_low;
  std::vector<double> action_high;
  int horizon = 500;
  bool normalize = false;  // observation normalization enabled for this task
};

struct StepResult {
  std::vector<double> observation;
  double reward_ext = 0.0;
  bool done = false;
  std::map<std::string, double> info;
};

// Deterministic dynamics; randomness only enters through reset jitter drawn
// from the caller's rng. Instances are single-owner mutable.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual std::vector<double> reset(numkit::Rng& rng) = 0;
  virtual StepResult step(const std::vector<double>& action) = 0;
  virtual int steps_elapsed() const = 0;
};

std::unique_ptr<Env> make_env(EnvId id, int horizon = 500);

}  // namespace vase::envs
