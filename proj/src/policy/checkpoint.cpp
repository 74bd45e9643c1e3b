#include "vase/policy/checkpoint.hpp"

#include <fstream>

#include "vase/ioutil.hpp"
#include "vase/numkit/errors.hpp"

namespace vase::policy {

void save_policy(std::ostream& os, const GaussianPolicy& pol) {
  pol.validate();
  os << "vase-policy v1\n";
  ioutil::write_mlp_spec(os, pol.spec);
  ioutil::write_named_vector(os, "params", pol.params);
  ioutil::write_named_vector(os, "log_std", pol.log_std);
}

GaussianPolicy load_policy(std::istream& is) {
  ioutil::expect_token(is, "vase-policy");
  ioutil::expect_token(is, "v1");
  GaussianPolicy pol;
  pol.spec = ioutil::read_mlp_spec(is);
  pol.params = ioutil::read_named_vector(is, "params");
  pol.log_std = ioutil::read_named_vector(is, "log_std");
  pol.validate();
  return pol;
}

void save_policy_file(const std::string& path, const GaussianPolicy& pol) {
  std::ofstream os(path);
  require(os.good(), "save_policy: cannot open " + path);
  save_policy(os, pol);
}

GaussianPolicy load_policy_file(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), "load_policy: cannot open " + path);
  return load_policy(is);
}

void save_value_net(std::ostream& os, const ValueNet& net) {
  os << "vase-value v1\n";
  ioutil::write_mlp_spec(os, net.spec);
  ioutil::write_named_vector(os, "params", net.params);
}

ValueNet load_value_net(std::istream& is) {
  ioutil::expect_token(is, "vase-value");
  ioutil::expect_token(is, "v1");
  ValueNet net;
  net.spec = ioutil::read_mlp_spec(is);
  net.params = ioutil::read_named_vector(is, "params");
  return net;
}

void save_value_net_file(const std::string& path, const ValueNet& net) {
  std::ofstream os(path);
  require(os.good(), "save_value_net: cannot open " + path);
  save_value_net(os, net);
}

ValueNet load_value_net_file(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), "load_value_net: cannot open " + path);
  return load_value_net(is);
}

}  // namespace vase::policy
