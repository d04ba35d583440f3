#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace unihead {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Replaceable entry points, so the harness itself can be tested against
// deliberately broken implementations.
struct VerifyHooks {
  std::function<double(int m, int k, double lambda)> eigenvalue;

  VerifyHooks();
};

// Known faults: "eigenvalue-sign".
VerifyHooks inject_fault(const std::string& name);
std::vector<std::string> fault_names();

struct VerifyReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool all_passed() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> verify_suites();  // kernel, bounds, attention, prefix, seq2seq, all

// Throws DomainError on an unknown suite name.
VerifyReport run_verify(const std::string& suite, const VerifyHooks& hooks = VerifyHooks(),
                        std::uint64_t seed = 20240601);

}  // namespace unihead
