#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unihead/attention.hpp"
#include "unihead/bounds.hpp"
#include "unihead/parallel.hpp"
#include "unihead/sphere.hpp"
#include "unihead/targets.hpp"

namespace unihead {

// p_alpha = cell centers of an equal-area partition, p_beta = f(p_alpha).
ControlPoints synthesize_prefix(const TargetFunction& f, int N, double lambda, std::uint64_t seed,
                                PartitionMode mode = PartitionMode::Zonal);

// Core-head weights xi_k = c_{m+1}(lambda) f(b_k) w_m(V_k) / w_m stored as beta.
ControlPoints synthesize_core_weights(const TargetFunction& f, const Partition& part,
                                      double lambda);

// Max and mean of ||f - approx|| over uniform samples. A lower bound on the
// true sup norm. The first n samples of a 2n run are the n-sample run.
ErrorStats sup_error_estimate(const TargetFunction& f, const SphereMap& approx, int n_samples,
                              std::uint64_t seed);

// Empirical sup of |1 - (c/N) sum_k exp(lambda <x, p_k>)|.
double verify_denominator_constancy(const ControlPoints& cp, int n_samples, std::uint64_t seed);

struct ExtendedHead {
  PrefixTokens prefix;
  AttentionHeadParams head;
};

// Same prefix with the augmented universal head, valid for any input length.
ExtendedHead element_wise_extend(const ControlPoints& cp, double M);

// Lift, run one classical head over the whole sequence, project.
std::vector<Vec> element_wise_eval(const ExtendedHead& eh, const std::vector<SpherePoint>& xs);

struct ApproximationReport {
  std::string name;
  int m = 0;
  int N = 0;
  double lambda = 0.0;
  double sup_error = 0.0;
  double mean_error = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
};

// Budget-driven run: given (N, lambda), synthesize and measure the split head.
ApproximationReport approximate_budget(const TargetFunction& f, int N, double lambda,
                                       int samples, std::uint64_t seed,
                                       ControlPoints* cp_out = nullptr);

struct BoundPlan {
  double eps = 0.0;
  NormalizedParameters params;
  bool executable = false;  // log10N within the configured cap
};

// Bound-driven sizing; never executes, only reports.
BoundPlan plan_from_bounds(const TargetFunction& f, double eps, BoundMode mode,
                           double log10_cap);

std::string csv_header();
std::string csv_row(const ApproximationReport& r, bool with_timing = true);

}  // namespace unihead
