#include "unihead/targets.hpp"

#include <algorithm>
#include <cmath>

#include "unihead/errors.hpp"

namespace unihead {

namespace {

Vec vec_param(const nlohmann::json& params, const char* key, int len, const Vec& fallback) {
  if (!params.contains(key)) return fallback;
  const auto v = params.at(key).get<std::vector<double>>();
  if (static_cast<int>(v.size()) != len)
    throw DomainError(std::string("target parameter '") + key + "' must have m+1 entries");
  return Eigen::Map<const Vec>(v.data(), len);
}

void finish_spec(TargetFunction& f, double L, double f_sup) {
  f.spec.L = L;
  f.spec.f_sup = f_sup;
  f.spec.C_H = f_sup > 0.0 ? f_sup : 1.0;
  f.spec.C_R = 1.0;
}

}  // namespace

std::vector<std::string> target_names() {
  return {"constant", "identity", "linear", "vmf_bump", "coordinate_max"};
}

TargetFunction make_target(const std::string& name, int m, const nlohmann::json& params) {
  if (m < 1) throw DomainError("make_target: m must be >= 1");
  const int e = m + 1;
  TargetFunction f;
  f.name = name;
  f.m = m;

  if (name == "constant") {
    const Vec c = vec_param(params, "value", e, Vec::Constant(e, 0.5));
    f.eval = [c](const SpherePoint&) { return c; };
    // a constant has zero modulus; the bounds need L > 0
    finish_spec(f, 1e-12, c.cwiseAbs().maxCoeff());
  } else if (name == "identity") {
    f.eval = [](const SpherePoint& x) { return x.coords(); };
    finish_spec(f, 1.0, 1.0);
  } else if (name == "linear") {
    Vec a0 = Vec::Zero(e);
    a0[0] = 1.0;
    const Vec a = vec_param(params, "a", e, a0);
    f.eval = [a](const SpherePoint& x) { return Vec(a.dot(x.coords()) * a); };
    const double s = a.norm() * a.cwiseAbs().maxCoeff();
    finish_spec(f, s > 0.0 ? s : 1e-12, s);
  } else if (name == "vmf_bump") {
    const double s = params.value("s", 4.0);
    if (!(s > 0.0)) throw DomainError("vmf_bump: s must be > 0");
    const Vec c = project_to_sphere(vec_param(params, "c", e, Vec::Unit(e, e - 1))).coords();
    f.eval = [c, s](const SpherePoint& x) {
      return Vec(std::exp(s * (c.dot(x.coords()) - 1.0)) * c);
    };
    // max over theta of |d/dtheta exp(s(cos theta - 1))| sits where
    // s u^2 + u - s = 0 with u = cos theta
    const double u = (-1.0 + std::sqrt(1.0 + 4.0 * s * s)) / (2.0 * s);
    const double slope = s * std::sqrt(std::max(0.0, 1.0 - u * u)) * std::exp(s * (u - 1.0));
    const double cmax = c.cwiseAbs().maxCoeff();
    finish_spec(f, slope * cmax, cmax);
  } else if (name == "coordinate_max") {
    f.eval = [e](const SpherePoint& x) { return Vec(Vec::Constant(e, x.coords().maxCoeff())); };
    finish_spec(f, 1.0, 1.0);
  } else {
    throw DomainError("unknown target '" + name + "'");
  }
  return f;
}

double sampled_sup(const TargetFunction& f, int samples, std::uint64_t seed) {
  double mx = 0.0;
  for (const auto& x : uniform_sphere_sample(f.m, samples, seed))
    mx = std::max(mx, f(x).cwiseAbs().maxCoeff());
  return mx;
}

}  // namespace unihead
