#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vase/envs/cartpole_swingup.hpp"
#include "vase/envs/double_pendulum.hpp"
#include "vase/envs/env.hpp"
#include "vase/envs/mountain_car.hpp"
#include "vase/envs/normalizer.hpp"
#include "vase/envs/plane2d.hpp"
#include "vase/numkit/errors.hpp"

using namespace vase;
using namespace vase::envs;
using numkit::Rng;

TEST_CASE("plane2d reset starts exactly at the origin") {
  Plane2dEnv env;
  Rng rng(1);
  const auto obs = env.reset(rng);
  CHECK(obs == std::vector<double>{0.0, 0.0});
  CHECK(env.steps_elapsed() == 0);

  Rng rng2(1);
  Plane2dEnv env2;
  CHECK(env2.reset(rng2) == obs);
}

TEST_CASE("plane2d basic step and clipping") {
  Plane2dEnv env;
  Rng rng(2);
  env.reset(rng);
  auto r = env.step({0.01, 0.0});
  CHECK(r.observation[0] == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(r.observation[1] == 0.0);
  CHECK(r.reward_ext == 0.0);
  CHECK_FALSE(r.done);

  // oversized actions are clipped, not rejected
  r = env.step({5.0, -5.0});
  CHECK(r.observation[0] == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(r.observation[1] == doctest::Approx(-0.01).epsilon(1e-12));
}

TEST_CASE("plane2d wraps around the square") {
  Plane2dEnv env;
  Rng rng(3);
  env.reset(rng);
  // walk to x = 2.495, then one more step wraps to -2.495
  for (int i = 0; i < 249; ++i) env.step({0.01, 0.0});
  auto r = env.step({0.005, 0.0});
  CHECK(r.observation[0] == doctest::Approx(2.495).epsilon(1e-9));
  r = env.step({0.01, 0.0});
  CHECK(r.observation[0] == doctest::Approx(-2.495).epsilon(1e-9));
}

TEST_CASE("plane2d goal detection") {
  Plane2dEnv env(500);
  Rng rng(4);
  env.reset(rng);
  // direct construction of the goal approach via a long scripted walk is
  // slow; use the configurable goal instead
  Plane2dEnv near_goal(500, 0.0, 0.01, 0.05);
  near_goal.reset(rng);
  const auto r = near_goal.step({0.0, 0.005});
  CHECK(r.reward_ext == 1.0);
  CHECK(r.done);
}

TEST_CASE("plane2d positions stay inside [-B, B)^2 under random walk") {
  Plane2dEnv env(100000);
  Rng rng(5);
  env.reset(rng);
  for (int i = 0; i < 20000; ++i) {
    const auto r = env.step({rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02)});
    REQUIRE(r.observation[0] >= -Plane2dEnv::kHalfWidth);
    REQUIRE(r.observation[0] < Plane2dEnv::kHalfWidth);
    REQUIRE(r.observation[1] >= -Plane2dEnv::kHalfWidth);
    REQUIRE(r.observation[1] < Plane2dEnv::kHalfWidth);
    if (r.done) break;
  }
}

TEST_CASE("mountaincar dynamics at the flat point") {
  MountainCarEnv env;
  env.set_state(0.0, 0.0);
  const auto r = env.step({0.0});
  CHECK(r.observation[1] == doctest::Approx(-0.0025).epsilon(1e-12));
  CHECK(r.observation[0] == doctest::Approx(-0.0025).epsilon(1e-12));
}

TEST_CASE("mountaincar goal gives reward and terminates") {
  MountainCarEnv env;
  env.set_state(0.44, 0.07);
  const auto r = env.step({1.0});
  CHECK(r.reward_ext == 1.0);
  CHECK(r.done);
}

TEST_CASE("mountaincar cannot crest in a single full-throttle pass") {
  MountainCarEnv env(500);
  Rng rng(6);
  env.reset(rng);
  double max_x = -1.2;
  for (int i = 0; i < 500; ++i) {
    const auto r = env.step({1.0});
    max_x = std::max(max_x, r.observation[0]);
    if (r.done) break;
  }
  CHECK(max_x < MountainCarEnv::kGoalPos);
}

TEST_CASE("mountaincar oscillation policy does reach the goal") {
  MountainCarEnv env(500);
  Rng rng(7);
  auto obs = env.reset(rng);
  bool reached = false;
  for (int i = 0; i < 500; ++i) {
    const double a = obs[1] >= 0.0 ? 1.0 : -1.0;  // push with the velocity
    const auto r = env.step({a});
    obs = r.observation;
    if (r.reward_ext > 0.0) {
      reached = true;
      break;
    }
  }
  CHECK(reached);
}

TEST_CASE("mountaincar state bounds hold under random actions") {
  MountainCarEnv env(100000);
  Rng rng(8);
  env.reset(rng);
  for (int i = 0; i < 20000; ++i) {
    const auto r = env.step({rng.uniform(-1.5, 1.5)});
    REQUIRE(std::abs(r.observation[1]) <= MountainCarEnv::kMaxSpeed + 1e-15);
    REQUIRE(r.observation[0] >= MountainCarEnv::kMinPos);
    REQUIRE(r.observation[0] <= MountainCarEnv::kMaxPos);
    if (r.done) break;
  }
}

TEST_CASE("cartpole upright equilibrium earns reward") {
  CartpoleSwingupEnv env;
  env.set_state(0.0, 0.0, 0.0, 0.0);
  const auto r = env.step({0.0});
  CHECK(r.reward_ext == 1.0);
  CHECK_FALSE(r.done);
}

TEST_CASE("cartpole hanging pole earns nothing") {
  CartpoleSwingupEnv env;
  env.set_state(0.0, std::numbers::pi, 0.0, 0.0);
  const auto r = env.step({0.0});
  CHECK(r.reward_ext == 0.0);
}

TEST_CASE("cartpole reward threshold is cos(beta) > 0.9") {
  CartpoleSwingupEnv env;
  // beta with cos just above 0.9 stays rewarded after one near-static step
  env.set_state(0.0, std::acos(0.95), 0.0, 0.0);
  CHECK(env.step({0.0}).reward_ext == 1.0);
  env.set_state(0.0, std::acos(0.5), 0.0, 0.0);
  CHECK(env.step({0.0}).reward_ext == 0.0);
}

TEST_CASE("cartpole unactuated energy drift below 1% at refined dt") {
  CartpoleSwingupEnv env(2000, 0.0025);
  env.set_state(0.3, 2.5, 0.4, 0.0);
  const double e0 = env.total_energy();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    env.step({0.0});
    worst = std::max(worst, std::abs(env.total_energy() - e0));
  }
  CHECK(worst / std::abs(e0) < 0.01);
}

TEST_CASE("double pendulum upright tip is at the target") {
  DoublePendulumEnv env;
  env.set_state(0.0, 0.0, 0.0, 0.0);
  CHECK(env.tip_distance() == doctest::Approx(0.0).epsilon(1e-12));
  const auto r = env.step({0.0});
  CHECK(r.reward_ext == 1.0);
}

TEST_CASE("double pendulum hanging configuration is far from the target") {
  DoublePendulumEnv env;
  env.set_state(std::numbers::pi, 0.0, 0.0, 0.0);
  CHECK(env.tip_distance() == doctest::Approx(4.0).epsilon(1e-12));
  const auto r = env.step({0.0});
  CHECK(r.reward_ext == 0.0);
}

TEST_CASE("double pendulum unactuated energy drift below 1% at refined dt") {
  DoublePendulumEnv env(2000, 0.0025);
  env.set_state(2.0, 0.7, 0.3, -0.2);
  const double e0 = env.total_energy();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    env.step({0.0});
    worst = std::max(worst, std::abs(env.total_energy() - e0));
  }
  CHECK(worst / std::abs(e0) < 0.01);
}

TEST_CASE("environments replay bit-identically from the same seed") {
  for (EnvId id : {EnvId::kPlane2d, EnvId::kMountainCar, EnvId::kCartpoleSwingup,
                   EnvId::kDoublePendulum}) {
    auto env_a = make_env(id, 100);
    auto env_b = make_env(id, 100);
    Rng rng_a(99), rng_b(99);
    auto obs_a = env_a->reset(rng_a);
    auto obs_b = env_b->reset(rng_b);
    REQUIRE(obs_a == obs_b);
    Rng act(100);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> action(env_a->spec().action_dim);
      for (auto& v : action) v = act.uniform(-1, 1);
      const auto ra = env_a->step(action);
      const auto rb = env_b->step(action);
      REQUIRE(ra.observation == rb.observation);
      REQUIRE(ra.reward_ext == rb.reward_ext);
      REQUIRE(ra.done == rb.done);
      if (ra.done) break;
    }
  }
}

TEST_CASE("env ids parse and print round-trip") {
  for (EnvId id : {EnvId::kPlane2d, EnvId::kMountainCar, EnvId::kCartpoleSwingup,
                   EnvId::kDoublePendulum}) {
    CHECK(parse_env_id(env_name(id)) == id);
  }
  CHECK_THROWS_AS(parse_env_id("halfcheetah"), InvalidArgument);
}

TEST_CASE("normalizer first observation maps to zero") {
  ObsNormalizer norm(2);
  const auto out = norm.normalize({5.0, -3.0});
  CHECK(out == std::vector<double>{0.0, 0.0});
}

TEST_CASE("normalizer constant stream stays zero") {
  ObsNormalizer norm(1);
  for (int i = 0; i < 100; ++i) {
    const auto out = norm.normalize({7.7});
    CHECK(out[0] == 0.0);
  }
}

TEST_CASE("normalizer standardizes a Gaussian stream") {
  ObsNormalizer norm(1);
  Rng rng(9);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double o = 5.0 + 2.0 * rng.normal();
    const double z = norm.normalize({o})[0];
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(sd - 1.0) < 0.02);
}

TEST_CASE("normalizer apply is read-only") {
  ObsNormalizer norm(1);
  for (int i = 0; i < 20; ++i) norm.normalize({static_cast<double>(i)});
  const auto count_before = norm.count();
  const auto a = norm.apply({3.0});
  const auto b = norm.apply({3.0});
  CHECK(a == b);
  CHECK(norm.count() == count_before);
}
