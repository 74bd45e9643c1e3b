#include "vase/bnn/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "vase/ioutil.hpp"
#include "vase/numkit/errors.hpp"

namespace vase::ioutil {

std::string format_exact(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

double parse_exact(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  require(end != begin && *end == '\0', "checkpoint: malformed number '" + token + "'");
  return v;
}

std::string format_csv(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_named_vector(std::ostream& os, const std::string& name,
                        const std::vector<double>& values) {
  os << name << ' ' << values.size();
  for (double v : values) os << ' ' << format_exact(v);
  os << '\n';
}

std::vector<double> read_named_vector(std::istream& is, const std::string& name) {
  expect_token(is, name);
  std::size_t n = 0;
  is >> n;
  require(static_cast<bool>(is), "checkpoint: missing length for " + name);
  std::vector<double> values(n);
  std::string token;
  for (std::size_t i = 0; i < n; ++i) {
    is >> token;
    require(static_cast<bool>(is), "checkpoint: truncated vector " + name);
    values[i] = parse_exact(token);
  }
  return values;
}

void write_mlp_spec(std::ostream& os, const numkit::MlpSpec& spec) {
  os << "layers";
  for (int l : spec.layers) os << ' ' << l;
  os << '\n';
  os << "activation " << (spec.hidden == numkit::Activation::kRelu ? "relu" : "tanh")
     << '\n';
}

numkit::MlpSpec read_mlp_spec(std::istream& is) {
  expect_token(is, "layers");
  numkit::MlpSpec spec;
  std::string line;
  std::getline(is, line);
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    spec.layers.push_back(std::atoi(line.c_str() + pos));
    while (pos < line.size() && line[pos] != ' ') ++pos;
  }
  expect_token(is, "activation");
  std::string act;
  is >> act;
  require(act == "relu" || act == "tanh", "checkpoint: unknown activation " + act);
  spec.hidden = act == "relu" ? numkit::Activation::kRelu : numkit::Activation::kTanh;
  spec.validate();
  return spec;
}

void expect_token(std::istream& is, const std::string& expected) {
  std::string token;
  is >> token;
  require(token == expected,
          "checkpoint: expected '" + expected + "', got '" + token + "'");
}

}  // namespace vase::ioutil

namespace vase::bnn {

namespace {
constexpr const char* kMagic = "vase-posterior";
constexpr const char* kVersion = "v1";
}  // namespace

void save_posterior(std::ostream& os, const VariationalPosterior& post,
                    const PriorSpec& prior, const LikelihoodSpec& lik) {
  post.validate();
  os << kMagic << ' ' << kVersion << '\n';
  ioutil::write_mlp_spec(os, post.spec);
  os << "sigma_m " << ioutil::format_exact(prior.sigma_m) << '\n';
  os << "sigma_c " << ioutil::format_exact(lik.sigma_c) << '\n';
  os << "per_dimension " << (lik.per_dimension ? 1 : 0) << '\n';
  ioutil::write_named_vector(os, "mu", post.mu);
  ioutil::write_named_vector(os, "rho", post.rho);
}

PosteriorCheckpoint load_posterior(std::istream& is) {
  ioutil::expect_token(is, kMagic);
  ioutil::expect_token(is, kVersion);
  PosteriorCheckpoint ckpt;
  ckpt.posterior.spec = ioutil::read_mlp_spec(is);
  std::string token;
  ioutil::expect_token(is, "sigma_m");
  is >> token;
  ckpt.prior.sigma_m = ioutil::parse_exact(token);
  ioutil::expect_token(is, "sigma_c");
  is >> token;
  ckpt.likelihood.sigma_c = ioutil::parse_exact(token);
  ioutil::expect_token(is, "per_dimension");
  int per_dim = 0;
  is >> per_dim;
  ckpt.likelihood.per_dimension = per_dim != 0;
  ckpt.posterior.mu = ioutil::read_named_vector(is, "mu");
  ckpt.posterior.rho = ioutil::read_named_vector(is, "rho");
  ckpt.posterior.validate();
  return ckpt;
}

void save_posterior_file(const std::string& path, const VariationalPosterior& post,
                         const PriorSpec& prior, const LikelihoodSpec& lik) {
  std::ofstream os(path);
  require(os.good(), "save_posterior: cannot open " + path);
  save_posterior(os, post, prior, lik);
}

PosteriorCheckpoint load_posterior_file(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), "load_posterior: cannot open " + path);
  return load_posterior(is);
}

}  // namespace vase::bnn
