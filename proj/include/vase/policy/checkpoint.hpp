#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "vase/policy/baseline.hpp"
#include "vase/policy/gaussian_policy.hpp"

namespace vase::policy {

// Versioned textual records; values round-trip bit-exactly (hex floats).
void save_policy(std::ostream& os, const GaussianPolicy& pol);
GaussianPolicy load_policy(std::istream& is);
void save_policy_file(const std::string& path, const GaussianPolicy& pol);
GaussianPolicy load_policy_file(const std::string& path);

void save_value_net(std::ostream& os, const ValueNet& net);
ValueNet load_value_net(std::istream& is);
void save_value_net_file(const std::string& path, const ValueNet& net);
ValueNet load_value_net_file(const std::string& path);

}  // namespace vase::policy
