#include "vase/envs/env.hpp"

#include "vase/envs/cartpole_swingup.hpp"
#include "vase/envs/double_pendulum.hpp"
#include "vase/envs/mountain_car.hpp"
#include "vase/envs/plane2d.hpp"
#include "vase/numkit/errors.hpp"

namespace vase::envs {

EnvId parse_env_id(const std::string& name) {
  if (name == "plane2d") return EnvId::kPlane2d;
  if (name == "mountaincar") return EnvId::kMountainCar;
  if (name == "cartpole_swingup") return EnvId::kCartpoleSwingup;
  if (name == "double_pendulum") return EnvId::kDoublePendulum;
  throw InvalidArgument("unknown environment '" + name + "'");
}

std::string env_name(EnvId id) {
  switch (id) {
    case EnvId::kPlane2d: return "plane2d";
    case EnvId::kMountainCar: return "mountaincar";
    case EnvId::kCartpoleSwingup: return "cartpole_swingup";
    case EnvId::kDoublePendulum: return "double_pendulum";
  }
  return "?";
}

std::unique_ptr<Env> make_env(EnvId id, int horizon) {
  require(horizon >= 1, "make_env: horizon must be >= 1");
  switch (id) {
    case EnvId::kPlane2d: return std::make_unique<Plane2dEnv>(horizon);
    case EnvId::kMountainCar: return std::make_unique<MountainCarEnv>(horizon);
    case EnvId::kCartpoleSwingup: return std::make_unique<CartpoleSwingupEnv>(horizon);
    case EnvId::kDoublePendulum: return std::make_unique<DoublePendulumEnv>(horizon);
  }
  throw InvalidArgument("make_env: bad id");
}

}  // namespace vase::envs
