#include "vase/trainer/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "vase/envs/plane2d.hpp"
#include "vase/numkit/errors.hpp"
#include "vase/policy/gae.hpp"

namespace vase::trainer {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Value-net inputs are [obs, t/T]: the time fraction makes finite-horizon
// reward-to-go representable, which keeps intrinsic-only advantages from
// aliasing onto early-episode states.
std::vector<double> baseline_inputs(const policy::TrajectoryBatch& batch,
                                    int horizon) {
  const std::size_t n = batch.size();
  const std::size_t od = batch.obs_dim;
  std::vector<double> inputs(n * (od + 1));
  const std::size_t n_eps = batch.episode_starts.size();
  for (std::size_t e = 0; e < n_eps; ++e) {
    const std::size_t lo = batch.episode_starts[e];
    const std::size_t hi = (e + 1 < n_eps) ? batch.episode_starts[e + 1] : n;
    for (std::size_t i = lo; i < hi; ++i) {
      std::copy(batch.observations.begin() + i * od,
                batch.observations.begin() + (i + 1) * od,
                inputs.begin() + i * (od + 1));
      inputs[i * (od + 1) + od] =
          static_cast<double>(i - lo) / static_cast<double>(horizon);
    }
  }
  return inputs;
}

}  // namespace

void TrainConfig::validate() const {
  require(horizon >= 1, "TrainConfig: horizon must be >= 1");
  require(n_iterations >= 0, "TrainConfig: n_iterations must be >= 0");
  require(batch_steps >= horizon, "TrainConfig: batch_steps must be >= horizon");
  require(model.hidden >= 1 && policy.hidden >= 1 && baseline.hidden >= 1,
          "TrainConfig: hidden sizes must be >= 1");
  require(model.lr > 0 && baseline.lr > 0, "TrainConfig: learning rates must be positive");
  require(model.minibatch >= 1, "TrainConfig: model minibatch must be >= 1");
  require(model.steps_per_iteration >= 0,
          "TrainConfig: model steps_per_iteration must be >= 0");
  require(plane2d_goal_radius > 0.0, "TrainConfig: goal radius must be positive");
  surprise.validate();
  model.prior.validate();
  trpo.validate();
}

Trainer::Trainer(TrainConfig cfg)
    : cfg_(std::move(cfg)),
      pool_(cfg_.pool_capacity, cfg_.pool_min_size),
      env_rng_(0),
      policy_rng_(0),
      surprise_root_(0),
      model_rng_(0) {
  cfg_.validate();
  if (cfg_.env == envs::EnvId::kPlane2d) {
    env_ = std::make_unique<envs::Plane2dEnv>(cfg_.horizon, cfg_.plane2d_goal_x,
                                              cfg_.plane2d_goal_y,
                                              cfg_.plane2d_goal_radius);
  } else {
    env_ = envs::make_env(cfg_.env, cfg_.horizon);
  }
  normalize_obs_ = cfg_.normalize_override < 0 ? env_->spec().normalize
                                               : cfg_.normalize_override > 0;
  const int sd = env_->spec().state_dim;
  const int ad = env_->spec().action_dim;
  normalizer_ = envs::ObsNormalizer(sd);

  numkit::Rng root(cfg_.seed);
  env_rng_ = root.split(1);
  policy_rng_ = root.split(2);
  surprise_root_ = root.split(3);
  model_rng_ = root.split(4);
  numkit::Rng init_rng = root.split(5);

  numkit::MlpSpec model_spec;
  model_spec.layers = {sd + ad, cfg_.model.hidden, sd};
  model_spec.hidden = cfg_.model.activation;
  posterior_ = bnn::init_posterior(model_spec, cfg_.model.prior, init_rng);

  policy_ = policy::init_policy(sd, cfg_.policy.hidden, ad, init_rng,
                                cfg_.policy.init_std);
  value_net_ = policy::init_value_net(sd + 1, cfg_.baseline.hidden, init_rng);

  bayes_settings_.prior = cfg_.model.prior;
  bayes_settings_.lr = cfg_.model.lr;
  bayes_settings_.kl_weight = 1.0 / static_cast<double>(cfg_.pool_capacity);
}

std::vector<double> Trainer::to_env_action(const std::vector<double>& policy_action) const {
  const auto& spec = env_->spec();
  std::vector<double> out(policy_action.size());
  for (std::size_t j = 0; j < policy_action.size(); ++j) {
    const double clipped = std::clamp(policy_action[j], -1.0, 1.0);
    out[j] = spec.action_low[j] +
             0.5 * (clipped + 1.0) * (spec.action_high[j] - spec.action_low[j]);
  }
  return out;
}

Trainer::CollectResult Trainer::collect_batch(const StepObserver* observer,
                                              bool stop_on_reward,
                                              std::uint64_t step_cap) {
  const int sd = env_->spec().state_dim;
  const int ad = env_->spec().action_dim;

  CollectResult result;
  auto& batch = result.batch;
  batch.obs_dim = sd;
  batch.action_dim = ad;

  // median-of-previous-batches scale for the optional normalization switch
  double median_scale = 1.0;
  if (cfg_.surprise.normalize_median && !surprise_medians_.empty()) {
    double acc = 0.0;
    for (double m : surprise_medians_) acc += m;
    median_scale = std::max(acc / static_cast<double>(surprise_medians_.size()), 1e-12);
  }

  std::vector<double> raw_surprises;

  while (batch.size() < static_cast<std::size_t>(cfg_.batch_steps)) {
    // one episode
    struct Row {
      std::vector<double> raw_obs, norm_obs, policy_action, clipped_action,
          env_action, raw_next, norm_next;
      double log_prob = 0.0;
      double r_ext = 0.0;
      bool done = false;
    };
    std::vector<Row> episode;
    episode.reserve(cfg_.horizon);
    const std::uint64_t episode_step_base = global_step_;

    auto raw_obs = env_->reset(env_rng_);
    auto norm_obs = normalize_obs_ ? normalizer_.normalize(raw_obs) : raw_obs;
    bool stop_now = false;

    while (true) {
      Row row;
      row.raw_obs = raw_obs;
      row.norm_obs = norm_obs;
      auto [action, lp] = policy::sample_action(policy_, norm_obs, policy_rng_);
      row.policy_action = action;
      row.clipped_action.resize(ad);
      for (int j = 0; j < ad; ++j) row.clipped_action[j] = std::clamp(action[j], -1.0, 1.0);
      row.env_action = to_env_action(action);
      row.log_prob = lp;

      const auto step = env_->step(row.env_action);
      row.raw_next = step.observation;
      row.norm_next = normalize_obs_ ? normalizer_.normalize(step.observation)
                                     : step.observation;
      row.r_ext = step.reward_ext;
      row.done = step.done;
      ++global_step_;
      raw_obs = row.raw_next;
      norm_obs = row.norm_next;
      episode.push_back(std::move(row));

      if (stop_on_reward && step.reward_ext > 0.0) {
        result.reward_found = true;
        result.reward_step = global_step_;
        stop_now = true;
      }
      if (step_cap > 0 && global_step_ >= step_cap) {
        result.capped = true;
        stop_now = true;
      }
      if (stop_now || step.done) break;
    }

    // Score the episode's transitions against the iteration's posterior
    // snapshot (the model is only updated after collection).
    const std::size_t n = episode.size();
    std::vector<double> states(n * sd), actions(n * ad), nexts(n * sd);
    std::vector<double> ext(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(episode[i].norm_obs.begin(), episode[i].norm_obs.end(),
                states.begin() + i * sd);
      std::copy(episode[i].clipped_action.begin(), episode[i].clipped_action.end(),
                actions.begin() + i * ad);
      std::copy(episode[i].norm_next.begin(), episode[i].norm_next.end(),
                nexts.begin() + i * sd);
      ext[i] = episode[i].r_ext;
    }
    const auto surprises = surprise::score_transitions(
        posterior_, states, actions, nexts, n, cfg_.surprise, surprise_root_,
        episode_step_base, &bayes_settings_);

    batch.episode_starts.push_back(batch.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double u = surprises[i] / median_scale;
      raw_surprises.push_back(surprises[i]);
      const double r_int = surprise::intrinsic_reward(u, cfg_.surprise);
      const double r_total = ext[i] + r_int;

      batch.observations.insert(batch.observations.end(), episode[i].norm_obs.begin(),
                                episode[i].norm_obs.end());
      batch.actions.insert(batch.actions.end(), episode[i].policy_action.begin(),
                           episode[i].policy_action.end());
      batch.log_probs.push_back(episode[i].log_prob);
      batch.rewards.push_back(r_total);
      batch.rewards_ext.push_back(ext[i]);
      result.surprises.push_back(u);

      Transition tr;
      tr.state = episode[i].raw_obs;
      tr.action = episode[i].clipped_action;
      tr.next_state = episode[i].raw_next;
      tr.r_ext = ext[i];
      tr.u = u;
      tr.r_total = r_total;
      pool_.add(std::move(tr));

      if (observer) {
        StepRecord rec;
        rec.episode = episode_count_;
        rec.t = static_cast<int>(i);
        rec.raw_obs = episode[i].raw_obs;
        rec.norm_obs = episode[i].norm_obs;
        rec.action = episode[i].env_action;
        rec.r_ext = ext[i];
        rec.r_int = r_int;
        rec.done = episode[i].done;
        (*observer)(rec);
      }
    }
    ++episode_count_;
    ++result.episodes;
    if (result.reward_found || result.capped) break;
  }

  if (cfg_.surprise.normalize_median) {
    std::vector<double> magnitudes(raw_surprises.size());
    for (std::size_t i = 0; i < raw_surprises.size(); ++i) {
      magnitudes[i] = std::abs(raw_surprises[i]);
    }
    surprise_medians_.push_back(median_of(std::move(magnitudes)));
    if (surprise_medians_.size() > 10) surprise_medians_.pop_front();
  }
  return result;
}

void Trainer::update_model() {
  if (!pool_.ready()) return;  // early iterations: not enough data yet
  const double kl_weight = static_cast<double>(cfg_.model.minibatch) /
                           static_cast<double>(pool_.size());
  for (int k = 0; k < cfg_.model.steps_per_iteration; ++k) {
    const auto batch = pool_.sample_minibatch(
        model_rng_, cfg_.model.minibatch, normalize_obs_ ? &normalizer_ : nullptr);
    bnn::elbo_update(posterior_, batch, cfg_.model.prior, cfg_.surprise.lik,
                     model_rng_, cfg_.model.lr, model_moments_,
                     ++model_step_count_, kl_weight);
  }
}

IterationMetrics Trainer::train_iteration(int iteration, const StepObserver* observer) {
  IterationMetrics m;
  m.iteration = iteration;

  auto t0 = std::chrono::steady_clock::now();
  auto collected = collect_batch(observer, false, 0);
  m.t_collect = seconds_since(t0);

  auto& batch = collected.batch;
  m.steps = static_cast<int>(batch.size());
  m.episodes = collected.episodes;
  double ext_total = 0.0;
  for (double r : batch.rewards_ext) ext_total += r;
  m.avg_return_ext = ext_total / static_cast<double>(collected.episodes);
  double u_total = 0.0;
  for (double u : collected.surprises) u_total += u;
  m.mean_surprise = u_total / static_cast<double>(collected.surprises.size());

  t0 = std::chrono::steady_clock::now();
  update_model();
  m.t_model = seconds_since(t0);
  m.posterior_entropy = bnn::posterior_entropy(posterior_);
  m.pool_size = pool_.size();

  t0 = std::chrono::steady_clock::now();
  const auto vin = baseline_inputs(batch, cfg_.horizon);
  batch.values = policy::predict_values(value_net_, vin, batch.size());
  policy::compute_advantages(batch, cfg_.trpo.gamma, cfg_.trpo.gae_lambda);
  const auto diag = policy::trpo_update(policy_, batch, cfg_.trpo);
  m.t_policy = seconds_since(t0);
  m.policy_kl = diag.kl;
  m.surrogate_improvement = diag.surrogate_improvement;
  m.policy_step_accepted = diag.accepted;

  t0 = std::chrono::steady_clock::now();
  const auto fit = policy::fit_baseline(value_net_, vin, batch.size(),
                                        batch.returns, cfg_.baseline.lr,
                                        cfg_.baseline.steps);
  m.t_baseline = seconds_since(t0);
  m.baseline_ev = fit.explained_variance_after;
  return m;
}

RunArtifact Trainer::run(const StepObserver* observer) {
  RunArtifact artifact;
  artifact.iterations.reserve(cfg_.n_iterations);
  for (int iter = 0; iter < cfg_.n_iterations; ++iter) {
    try {
      artifact.iterations.push_back(train_iteration(iter, observer));
    } catch (const std::exception& e) {
      artifact.complete = false;
      artifact.abort_reason = e.what();
      break;
    }
  }
  return artifact;
}

Trainer::ExploreResult Trainer::explore_until_reward(std::uint64_t step_cap,
                                                     const StepObserver* observer) {
  require(step_cap >= 1, "explore_until_reward: step_cap must be >= 1");
  while (true) {
    auto collected = collect_batch(observer, true, step_cap);
    if (collected.reward_found) return {true, collected.reward_step};
    if (collected.capped) return {false, step_cap};

    // full batch: take the usual model and policy steps, then keep exploring
    update_model();
    auto& batch = collected.batch;
    const auto vin = baseline_inputs(batch, cfg_.horizon);
    batch.values = policy::predict_values(value_net_, vin, batch.size());
    policy::compute_advantages(batch, cfg_.trpo.gamma, cfg_.trpo.gae_lambda);
    policy::trpo_update(policy_, batch, cfg_.trpo);
    policy::fit_baseline(value_net_, vin, batch.size(), batch.returns,
                         cfg_.baseline.lr, cfg_.baseline.steps);
  }
}

}  // namespace vase::trainer
