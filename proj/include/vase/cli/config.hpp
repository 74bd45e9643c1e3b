#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "vase/trainer/trainer.hpp"

namespace vase::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key/value config text: one `dotted.key = value` per line, `#` starts
// a comment. Unknown keys are errors.
std::map<std::string, std::string> parse_kv_text(const std::string& text);
std::map<std::string, std::string> parse_kv_file(const std::string& path);

struct ExperimentConfig {
  trainer::TrainConfig base;
  std::vector<surprise::SurpriseMode> modes;
  std::vector<std::uint64_t> seeds;
  int workers = 1;

  void validate() const;  // seeds nonempty and distinct
};

ExperimentConfig experiment_from_kv(const std::map<std::string, std::string>& kv);
ExperimentConfig load_experiment_config(const std::string& path);

// Serialises every key, including defaulted values, as a parseable config.
// Loading the snapshot reproduces the configuration exactly.
void write_config_snapshot(std::ostream& os, const ExperimentConfig& cfg);

}  // namespace vase::cli
