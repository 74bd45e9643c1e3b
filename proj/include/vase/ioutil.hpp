#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "vase/numkit/mlp.hpp"

namespace vase::ioutil {

// Checkpoint scalars are written as C99 hex floats, which round-trip
// IEEE-754 doubles exactly.
std::string format_exact(double x);
double parse_exact(const std::string& token);

// Decimal formatting for CSV output: shortest-ish round-trip (%.17g).
std::string format_csv(double x);

void write_named_vector(std::ostream& os, const std::string& name,
                        const std::vector<double>& values);
std::vector<double> read_named_vector(std::istream& is, const std::string& name);

void write_mlp_spec(std::ostream& os, const numkit::MlpSpec& spec);
numkit::MlpSpec read_mlp_spec(std::istream& is);

// Consumes one token and checks it equals `expected`.
void expect_token(std::istream& is, const std::string& expected);

}  // namespace vase::ioutil
