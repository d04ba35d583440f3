#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unihead/bounds.hpp"

namespace unihead {

struct ExperimentConfig {
  std::string target;
  int m = 2;
  std::vector<double> lambdas{32.0};
  std::vector<int> Ns{1024};
  int samples = 2048;
  std::uint64_t seed = 1;
  BoundMode mode = BoundMode::Strict;
  bool augmented = false;
  std::optional<double> M;  // default: -(lambda + 30 + ln N)
  std::string csv;
  std::string prefix_out;
  nlohmann::json params = nlohmann::json::object();
  bool record_timing = true;

  void validate() const;
};

// Throws SchemaError on unknown keys or wrong types.
ExperimentConfig config_from_json(const nlohmann::json& j);

enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitNumeric = 3, kExitVerify = 4 };

// Whole command line; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unihead
