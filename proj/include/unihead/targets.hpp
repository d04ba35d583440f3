#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unihead/bounds.hpp"
#include "unihead/sphere.hpp"

namespace unihead {

// f : S^m -> R^{m+1} with declared smoothness metadata.
struct TargetFunction {
  std::string name;
  int m = 2;
  std::function<Vec(const SpherePoint&)> eval;
  SmoothnessSpec spec;
  bool lipschitz_estimated = false;
  bool sup_estimated = false;

  Vec operator()(const SpherePoint& x) const { return eval(x); }
};

// Built-in registry: constant, identity, linear, vmf_bump, coordinate_max.
// params (all optional):
//   constant: {"value": [..]}        linear: {"a": [..]}
//   vmf_bump: {"s": 4, "c": [..]}    coordinate-free targets ignore params.
TargetFunction make_target(const std::string& name, int m,
                           const nlohmann::json& params = nlohmann::json::object());

std::vector<std::string> target_names();

// Largest max_i |f_i(x)| over a uniform sample; used to audit declared f_sup.
double sampled_sup(const TargetFunction& f, int samples, std::uint64_t seed);

}  // namespace unihead
