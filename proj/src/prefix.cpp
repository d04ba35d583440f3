#include "unihead/prefix.hpp"

#include <chrono>
#include <cmath>

#include "unihead/artifact.hpp"
#include "unihead/errors.hpp"
#include "unihead/kernel.hpp"
#include "unihead/rng.hpp"

namespace unihead {

ControlPoints synthesize_prefix(const TargetFunction& f, int N, double lambda, std::uint64_t seed,
                                PartitionMode mode) {
  if (N < 1) throw DomainError("synthesize_prefix: N must be >= 1");
  if (!(lambda > 0.0)) throw DomainError("synthesize_prefix: lambda must be > 0");
  const Partition part = equal_area_partition(f.m, N, seed, mode);
  ControlPoints cp;
  cp.m = f.m;
  cp.lambda = lambda;
  cp.items.reserve(part.size());
  for (const auto& cell : part.cells) cp.items.push_back({cell.center, f(cell.center)});
  return cp;
}

ControlPoints synthesize_core_weights(const TargetFunction& f, const Partition& part,
                                      double lambda) {
  if (part.m != f.m) throw DimensionMismatch("synthesize_core_weights: partition dimension mismatch");
  const double log_c = vmf_log_normalizer(f.m, lambda);
  const double w = surface_area(f.m);
  ControlPoints cp;
  cp.m = f.m;
  cp.lambda = lambda;
  for (const auto& cell : part.cells)
    cp.items.push_back({cell.center, Vec(std::exp(log_c) * (cell.measure / w) * f(cell.center))});
  return cp;
}

ErrorStats sup_error_estimate(const TargetFunction& f, const SphereMap& approx, int n_samples,
                              std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("sup_error_estimate: n_samples must be >= 1");
  const auto xs = uniform_sphere_sample(f.m, n_samples, seed);
  return kernels::error_over_points(f.eval, approx, xs, kernels::Exec::Parallel);
}

double verify_denominator_constancy(const ControlPoints& cp, int n_samples, std::uint64_t seed) {
  cp.validate();
  if (n_samples < 1) throw DomainError("verify_denominator_constancy: n_samples must be >= 1");
  const auto xs = uniform_sphere_sample(cp.m, n_samples, seed);
  return kernels::denominator_deviation(cp, xs, kernels::Exec::Parallel);
}

ExtendedHead element_wise_extend(const ControlPoints& cp, double M) {
  return ExtendedHead{assemble_prefix_tokens(cp, M, true), build_universal_head(cp.m, M, true)};
}

std::vector<Vec> element_wise_eval(const ExtendedHead& eh, const std::vector<SpherePoint>& xs) {
  std::vector<Vec> in;
  in.reserve(xs.size());
  for (const auto& x : xs) in.push_back(lift(x, eh.prefix.augmented));
  auto out = classical_head(in, eh.prefix, eh.head);
  for (auto& v : out) v = project(v);
  return out;
}

ApproximationReport approximate_budget(const TargetFunction& f, int N, double lambda,
                                       int samples, std::uint64_t seed, ControlPoints* cp_out) {
  const auto t0 = std::chrono::steady_clock::now();
  ControlPoints cp = synthesize_prefix(f, N, lambda, derive_seed(seed, 1));
  const ErrorStats st = sup_error_estimate(
      f, [&cp](const SpherePoint& x) { return split_head(cp, x); }, samples, derive_seed(seed, 2));
  const auto t1 = std::chrono::steady_clock::now();
  ApproximationReport r;
  r.name = f.name;
  r.m = f.m;
  r.N = N;
  r.lambda = lambda;
  r.sup_error = st.sup;
  r.mean_error = st.mean;
  r.samples = st.samples;
  r.seed = seed;
  r.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (cp_out) *cp_out = std::move(cp);
  return r;
}

BoundPlan plan_from_bounds(const TargetFunction& f, double eps, BoundMode mode,
                           double log10_cap) {
  BoundPlan plan;
  plan.eps = eps;
  plan.params = theorem2_parameters(eps, f.spec, f.m, mode);
  plan.executable = plan.params.log10N <= log10_cap;
  return plan;
}

std::string csv_header() { return "name,m,lambda,N,sup_error,mean_error,samples,seed,wall_time_ms"; }

std::string csv_row(const ApproximationReport& r, bool with_timing) {
  std::string s = r.name;
  s += ',' + std::to_string(r.m);
  s += ',' + format_double(r.lambda);
  s += ',' + std::to_string(r.N);
  s += ',' + format_double(r.sup_error);
  s += ',' + format_double(r.mean_error);
  s += ',' + std::to_string(r.samples);
  s += ',' + std::to_string(r.seed);
  s += ',' + (with_timing ? format_double(std::round(r.wall_time_ms * 1000.0) / 1000.0) : std::string("0"));
  return s;
}

}  // namespace unihead
