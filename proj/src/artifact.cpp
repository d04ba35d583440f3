#include "unihead/artifact.hpp"

#include <charconv>
#include <fstream>

#include "unihead/errors.hpp"

namespace unihead {

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw SchemaError("not a decimal number: '" + s + "'");
  return v;
}

namespace {

nlohmann::json vec_json(const Vec& v) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(format_double(v[i]));
  return a;
}

nlohmann::json mat_json(const Mat& m) {
  auto a = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

double num(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("artifact: missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_string()) return parse_double(v.get<std::string>());
  if (v.is_number()) return v.get<double>();
  throw SchemaError(std::string("artifact: field '") + key + "' must be a number");
}

Vec row_of(const nlohmann::json& j, int d, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw SchemaError(std::string("artifact: ") + what + " row must have d entries");
  Vec v(d);
  for (int i = 0; i < d; ++i) {
    if (!j[i].is_string()) throw SchemaError(std::string("artifact: ") + what + " entries must be strings");
    v[i] = parse_double(j[i].get<std::string>());
  }
  return v;
}

Mat mat_of(const nlohmann::json& j, int d, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw SchemaError(std::string("artifact: ") + what + " must be d x d");
  Mat m(d, d);
  for (int r = 0; r < d; ++r) m.row(r) = row_of(j[r], d, what).transpose();
  return m;
}

}  // namespace

nlohmann::json artifact_to_json(const PrefixArtifact& a) {
  nlohmann::json j;
  j["d"] = a.prefix.d;
  j["m"] = a.prefix.m;
  j["lambda"] = format_double(a.prefix.lambda);
  j["M"] = format_double(a.prefix.M);
  j["augmented"] = a.prefix.augmented;
  auto toks = nlohmann::json::array();
  for (const auto& t : a.prefix.tokens) toks.push_back(vec_json(t));
  j["tokens"] = toks;
  j["H"] = mat_json(a.head.H);
  j["W_V"] = mat_json(a.head.W_V);
  if (!a.target.empty()) {
    j["target"] = a.target;
    j["params"] = a.params;
  }
  return j;
}

PrefixArtifact artifact_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("artifact: top level must be an object");
  for (const char* k : {"d", "m", "augmented", "tokens", "H", "W_V"})
    if (!j.contains(k)) throw SchemaError(std::string("artifact: missing field '") + k + "'");
  if (!j["d"].is_number_integer() || !j["m"].is_number_integer() || !j["augmented"].is_boolean())
    throw SchemaError("artifact: d and m must be integers, augmented a boolean");
  PrefixArtifact a;
  const int d = j["d"].get<int>();
  const int m = j["m"].get<int>();
  const bool aug = j["augmented"].get<bool>();
  if (m < 1 || d != 3 * (m + 1) + (aug ? 1 : 0))
    throw SchemaError("artifact: d must equal 3(m+1) (+1 when augmented)");
  a.prefix.d = d;
  a.prefix.m = m;
  a.prefix.augmented = aug;
  a.prefix.lambda = num(j, "lambda");
  a.prefix.M = num(j, "M");
  if (!(a.prefix.M < 0.0)) throw SchemaError("artifact: M must be negative");
  if (!(a.prefix.lambda > 0.0)) throw SchemaError("artifact: lambda must be positive");
  if (!j["tokens"].is_array() || j["tokens"].empty()) throw SchemaError("artifact: tokens must be a nonempty array");
  for (const auto& t : j["tokens"]) a.prefix.tokens.push_back(row_of(t, d, "token"));
  a.head.d = d;
  a.head.H = mat_of(j["H"], d, "H");
  a.head.W_V = mat_of(j["W_V"], d, "W_V");
  if (j.contains("target")) {
    if (!j["target"].is_string()) throw SchemaError("artifact: target must be a string");
    a.target = j["target"].get<std::string>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw SchemaError("artifact: params must be an object");
    a.params = j["params"];
  }
  return a;
}

PrefixArtifact make_artifact(const ControlPoints& cp, double M, bool augmented) {
  PrefixArtifact a;
  a.prefix = assemble_prefix_tokens(cp, M, augmented);
  a.head = build_universal_head(cp.m, M, augmented);
  return a;
}

ErrorStats artifact_error(const PrefixArtifact& a, const TargetFunction& f, int samples,
                          std::uint64_t seed) {
  if (a.prefix.m != f.m) throw DimensionMismatch("artifact_error: target dimension differs from the artifact");
  if (samples < 1) throw DomainError("artifact_error: samples must be >= 1");
  const auto xs = uniform_sphere_sample(f.m, samples, seed);
  const bool aug = a.prefix.augmented;
  return kernels::error_over_points(
      f.eval,
      [&a, aug](const SpherePoint& x) { return project(classical_head({lift(x, aug)}, a.prefix, a.head).front()); },
      xs, kernels::Exec::Parallel);
}

void export_prefix(const std::string& path, const PrefixArtifact& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << artifact_to_json(a).dump(1) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

PrefixArtifact import_prefix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("artifact: invalid JSON: ") + e.what());
  }
  return artifact_from_json(j);
}

}  // namespace unihead
