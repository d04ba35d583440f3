#pragma once

// Data-parallel kernels. Every kernel has a plain serial loop kept as the
// reference and an OpenMP path. Reductions in both go through fixed-size
// chunks merged in chunk order, so the two paths agree bit for bit at any
// thread count.

#include <cstdint>
#include <functional>
#include <vector>

#include "unihead/attention.hpp"
#include "unihead/kernel.hpp"
#include "unihead/sphere.hpp"

namespace unihead {

struct TargetFunction;

struct ErrorStats {
  double sup = 0.0;
  double mean = 0.0;
  int samples = 0;
};

using SphereMap = std::function<Vec(const SpherePoint&)>;

namespace kernels {

enum class Exec { Serial, Parallel };

std::vector<Vec> split_head_batch(const ControlPoints& cp, const std::vector<SpherePoint>& xs,
                                  Exec exec);

// sup and mean of ||f(x) - approx(x)||_2 over the given points.
ErrorStats error_over_points(const SphereMap& f, const SphereMap& approx,
                             const std::vector<SpherePoint>& xs, Exec exec);

ConvolutionEstimate convolve_mc(const TargetFunction& f, const VmfKernel& kern,
                                const SpherePoint& x, int n_samples, std::uint64_t seed,
                                Exec exec);

// sup over xs of |1 - (c/N) sum_k exp(lambda <x, alpha_k>)|.
double denominator_deviation(const ControlPoints& cp, const std::vector<SpherePoint>& xs,
                             Exec exec);

// Set the OpenMP thread count from UNIHEAD_THREADS if present.
void configure_threads_from_env();

int thread_count();

}  // namespace kernels
}  // namespace unihead
