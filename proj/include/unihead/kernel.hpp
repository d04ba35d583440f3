#pragma once

#include <cstdint>

#include "unihead/sphere.hpp"

namespace unihead {

struct TargetFunction;

// K(t) = c_{m+1}(lambda) exp(lambda t) on S^m.
struct VmfKernel {
  int m = 2;
  double lambda = 1.0;
  double log_normalizer = 0.0;  // ln c_{m+1}(lambda)
};

VmfKernel make_vmf_kernel(int m, double lambda);

// ln c_{m+1}(lambda) = ln w_m + nu ln(lambda) - ((m+1)/2) ln(2 pi) - ln I_nu(lambda),
// nu = (m+1)/2 - 1.
double vmf_log_normalizer(int m, double lambda);

// (w_{m-1}/w_m) * int_{-1}^{1} K(t) (1-t^2)^{(m-2)/2} dt by adaptive quadrature.
double kernel_norm(int m, double lambda);

// Funk-Hecke eigenvalue a_k^m = I_{(m-1)/2+k}(lambda) / I_{(m-1)/2}(lambda).
double kernel_eigenvalue(int m, int k, double lambda);

// Product-of-Amos lower bound on a_k^m.
double kernel_eigenvalue_lower_bound(int m, int k, double lambda);

double kernel_eval(const VmfKernel& kern, double t);
double kernel_log_eval(const VmfKernel& kern, double t);

struct ConvolutionEstimate {
  Vec value;
  Vec std_error;
};

// Monte-Carlo estimate of (1/w_m) int K(<x,y>) f(y) dw_m(y) with uniform y.
ConvolutionEstimate convolve_vmf(const TargetFunction& f, const VmfKernel& kern,
                                 const SpherePoint& x, int n_samples, std::uint64_t seed);

}  // namespace unihead
