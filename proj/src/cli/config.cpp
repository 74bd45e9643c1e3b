#include "vase/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vase/ioutil.hpp"

namespace vase::cli {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "env.id", "env.horizon", "env.normalize",
      "env.goal_x", "env.goal_y", "env.goal_radius",
      "train.iterations", "train.batch_steps",
      "surprise.mode", "surprise.delta", "surprise.eta", "surprise.n_samples",
      "surprise.sigma_c", "surprise.per_dimension_likelihood",
      "surprise.normalize_median",
      "model.hidden", "model.activation", "model.lr", "model.minibatch",
      "model.steps", "model.sigma_prior",
      "policy.hidden", "policy.init_std",
      "baseline.hidden", "baseline.lr", "baseline.steps",
      "trpo.max_kl", "trpo.cg_iters", "trpo.cg_damping", "trpo.backtracks",
      "trpo.gamma", "trpo.gae_lambda",
      "pool.capacity", "pool.min_size",
      "experiment.modes", "experiment.seeds", "experiment.workers",
      "dump.transitions",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + key + ": '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      throw ConfigError("config: unknown key '" + key + "'");
    }
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is.good()) throw ConfigError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_kv_text(buffer.str());
}

void ExperimentConfig::validate() const {
  base.validate();
  if (seeds.empty()) throw ConfigError("config: experiment.seeds must be nonempty");
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) {
    throw ConfigError("config: experiment.seeds must be distinct");
  }
  if (modes.empty()) throw ConfigError("config: no surprise modes selected");
  if (workers < 1) throw ConfigError("config: experiment.workers must be >= 1");
}

ExperimentConfig experiment_from_kv(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  cfg.seeds = {0, 1, 2, 3, 4};
  auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  auto& base = cfg.base;
  if (const auto* v = get("env.id")) base.env = envs::parse_env_id(*v);
  if (const auto* v = get("env.horizon")) base.horizon = static_cast<int>(to_long("env.horizon", *v));
  if (const auto* v = get("env.normalize")) {
    if (*v == "auto") {
      base.normalize_override = -1;
    } else {
      base.normalize_override = to_bool("env.normalize", *v) ? 1 : 0;
    }
  }
  if (const auto* v = get("env.goal_x")) base.plane2d_goal_x = to_double("env.goal_x", *v);
  if (const auto* v = get("env.goal_y")) base.plane2d_goal_y = to_double("env.goal_y", *v);
  if (const auto* v = get("env.goal_radius")) {
    base.plane2d_goal_radius = to_double("env.goal_radius", *v);
  }
  if (const auto* v = get("train.iterations")) {
    base.n_iterations = static_cast<int>(to_long("train.iterations", *v));
  }
  if (const auto* v = get("train.batch_steps")) {
    base.batch_steps = static_cast<int>(to_long("train.batch_steps", *v));
  }
  if (const auto* v = get("surprise.mode")) base.surprise.mode = surprise::parse_mode(*v);
  if (const auto* v = get("surprise.delta")) base.surprise.delta = to_double("surprise.delta", *v);
  if (const auto* v = get("surprise.eta")) base.surprise.eta = to_double("surprise.eta", *v);
  if (const auto* v = get("surprise.n_samples")) {
    base.surprise.n_samples = static_cast<std::size_t>(to_long("surprise.n_samples", *v));
  }
  if (const auto* v = get("surprise.sigma_c")) {
    base.surprise.lik.sigma_c = to_double("surprise.sigma_c", *v);
  }
  if (const auto* v = get("surprise.per_dimension_likelihood")) {
    base.surprise.lik.per_dimension = to_bool("surprise.per_dimension_likelihood", *v);
  }
  if (const auto* v = get("surprise.normalize_median")) {
    base.surprise.normalize_median = to_bool("surprise.normalize_median", *v);
  }
  if (const auto* v = get("model.hidden")) base.model.hidden = static_cast<int>(to_long("model.hidden", *v));
  if (const auto* v = get("model.activation")) {
    if (*v == "relu") {
      base.model.activation = numkit::Activation::kRelu;
    } else if (*v == "tanh") {
      base.model.activation = numkit::Activation::kTanh;
    } else {
      throw ConfigError("config: bad model.activation '" + *v + "'");
    }
  }
  if (const auto* v = get("model.lr")) base.model.lr = to_double("model.lr", *v);
  if (const auto* v = get("model.minibatch")) {
    base.model.minibatch = static_cast<std::size_t>(to_long("model.minibatch", *v));
  }
  if (const auto* v = get("model.steps")) {
    base.model.steps_per_iteration = static_cast<int>(to_long("model.steps", *v));
  }
  if (const auto* v = get("model.sigma_prior")) {
    base.model.prior.sigma_m = to_double("model.sigma_prior", *v);
  }
  if (const auto* v = get("policy.hidden")) base.policy.hidden = static_cast<int>(to_long("policy.hidden", *v));
  if (const auto* v = get("policy.init_std")) base.policy.init_std = to_double("policy.init_std", *v);
  if (const auto* v = get("baseline.hidden")) base.baseline.hidden = static_cast<int>(to_long("baseline.hidden", *v));
  if (const auto* v = get("baseline.lr")) base.baseline.lr = to_double("baseline.lr", *v);
  if (const auto* v = get("baseline.steps")) base.baseline.steps = static_cast<int>(to_long("baseline.steps", *v));
  if (const auto* v = get("trpo.max_kl")) base.trpo.max_kl = to_double("trpo.max_kl", *v);
  if (const auto* v = get("trpo.cg_iters")) base.trpo.cg_iters = static_cast<int>(to_long("trpo.cg_iters", *v));
  if (const auto* v = get("trpo.cg_damping")) base.trpo.cg_damping = to_double("trpo.cg_damping", *v);
  if (const auto* v = get("trpo.backtracks")) base.trpo.backtracks = static_cast<int>(to_long("trpo.backtracks", *v));
  if (const auto* v = get("trpo.gamma")) base.trpo.gamma = to_double("trpo.gamma", *v);
  if (const auto* v = get("trpo.gae_lambda")) base.trpo.gae_lambda = to_double("trpo.gae_lambda", *v);
  if (const auto* v = get("pool.capacity")) {
    base.pool_capacity = static_cast<std::size_t>(to_long("pool.capacity", *v));
  }
  if (const auto* v = get("pool.min_size")) {
    base.pool_min_size = static_cast<std::size_t>(to_long("pool.min_size", *v));
  }
  if (const auto* v = get("dump.transitions")) {
    base.dump_transitions = to_bool("dump.transitions", *v);
  }

  if (const auto* v = get("experiment.modes")) {
    for (const auto& name : split_list(*v)) cfg.modes.push_back(surprise::parse_mode(name));
  } else {
    cfg.modes = {base.surprise.mode};
  }
  if (const auto* v = get("experiment.seeds")) {
    cfg.seeds.clear();
    for (const auto& s : split_list(*v)) cfg.seeds.push_back(to_u64("experiment.seeds", s));
  }
  if (const auto* v = get("experiment.workers")) {
    cfg.workers = static_cast<int>(to_long("experiment.workers", *v));
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_from_kv(parse_kv_file(path));
}

void write_config_snapshot(std::ostream& os, const ExperimentConfig& cfg) {
  const auto& b = cfg.base;
  auto num = [](double x) { return ioutil::format_csv(x); };
  os << "baseline.hidden = " << b.baseline.hidden << '\n';
  os << "baseline.lr = " << num(b.baseline.lr) << '\n';
  os << "baseline.steps = " << b.baseline.steps << '\n';
  os << "dump.transitions = " << (b.dump_transitions ? "true" : "false") << '\n';
  os << "env.goal_radius = " << num(b.plane2d_goal_radius) << '\n';
  os << "env.goal_x = " << num(b.plane2d_goal_x) << '\n';
  os << "env.goal_y = " << num(b.plane2d_goal_y) << '\n';
  os << "env.horizon = " << b.horizon << '\n';
  os << "env.id = " << envs::env_name(b.env) << '\n';
  os << "env.normalize = "
     << (b.normalize_override < 0 ? "auto" : (b.normalize_override ? "on" : "off"))
     << '\n';
  os << "experiment.modes = ";
  for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
    if (i) os << ',';
    os << surprise::mode_name(cfg.modes[i]);
  }
  os << '\n';
  os << "experiment.seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    if (i) os << ',';
    os << cfg.seeds[i];
  }
  os << '\n';
  os << "experiment.workers = " << cfg.workers << '\n';
  os << "model.activation = "
     << (b.model.activation == numkit::Activation::kRelu ? "relu" : "tanh") << '\n';
  os << "model.hidden = " << b.model.hidden << '\n';
  os << "model.lr = " << num(b.model.lr) << '\n';
  os << "model.minibatch = " << b.model.minibatch << '\n';
  os << "model.sigma_prior = " << num(b.model.prior.sigma_m) << '\n';
  os << "model.steps = " << b.model.steps_per_iteration << '\n';
  os << "policy.hidden = " << b.policy.hidden << '\n';
  os << "policy.init_std = " << num(b.policy.init_std) << '\n';
  os << "pool.capacity = " << b.pool_capacity << '\n';
  os << "pool.min_size = " << b.pool_min_size << '\n';
  os << "surprise.delta = " << num(b.surprise.delta) << '\n';
  os << "surprise.eta = " << num(b.surprise.eta) << '\n';
  os << "surprise.mode = " << surprise::mode_name(b.surprise.mode) << '\n';
  os << "surprise.n_samples = " << b.surprise.n_samples << '\n';
  os << "surprise.normalize_median = "
     << (b.surprise.normalize_median ? "true" : "false") << '\n';
  os << "surprise.per_dimension_likelihood = "
     << (b.surprise.lik.per_dimension ? "true" : "false") << '\n';
  os << "surprise.sigma_c = " << num(b.surprise.lik.sigma_c) << '\n';
  os << "train.batch_steps = " << b.batch_steps << '\n';
  os << "train.iterations = " << b.n_iterations << '\n';
  os << "trpo.backtracks = " << b.trpo.backtracks << '\n';
  os << "trpo.cg_damping = " << num(b.trpo.cg_damping) << '\n';
  os << "trpo.cg_iters = " << b.trpo.cg_iters << '\n';
  os << "trpo.gae_lambda = " << num(b.trpo.gae_lambda) << '\n';
  os << "trpo.gamma = " << num(b.trpo.gamma) << '\n';
  os << "trpo.max_kl = " << num(b.trpo.max_kl) << '\n';
}

}  // namespace vase::cli
