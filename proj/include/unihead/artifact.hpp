#pragma once

#include <string>

#include "json.hpp"
#include "unihead/attention.hpp"
#include "unihead/parallel.hpp"
#include "unihead/targets.hpp"

namespace unihead {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

struct PrefixArtifact {
  PrefixTokens prefix;
  AttentionHeadParams head;
  // optional provenance: the target the prefix was synthesized for
  std::string target;
  nlohmann::json params = nlohmann::json::object();
};

PrefixArtifact make_artifact(const ControlPoints& cp, double M, bool augmented);

// Error of lift -> classical head -> project against f over uniform samples.
ErrorStats artifact_error(const PrefixArtifact& a, const TargetFunction& f, int samples,
                          std::uint64_t seed);

nlohmann::json artifact_to_json(const PrefixArtifact& a);
// Throws SchemaError on any structural mismatch.
PrefixArtifact artifact_from_json(const nlohmann::json& j);

void export_prefix(const std::string& path, const PrefixArtifact& a);
PrefixArtifact import_prefix(const std::string& path);

}  // namespace unihead
