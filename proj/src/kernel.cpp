#include "unihead/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "unihead/errors.hpp"
#include "unihead/parallel.hpp"
#include "unihead/specialfn.hpp"

namespace unihead {

VmfKernel make_vmf_kernel(int m, double lambda) {
  return VmfKernel{m, lambda, vmf_log_normalizer(m, lambda)};
}

double vmf_log_normalizer(int m, double lambda) {
  if (m < 1) throw DomainError("vmf_log_normalizer: m must be >= 1");
  if (!(lambda > 0.0)) throw DomainError("vmf_log_normalizer: lambda must be > 0");
  const double nu = 0.5 * (m + 1) - 1.0;
  return log_surface_area(m) + nu * std::log(lambda) - 0.5 * (m + 1) * std::log(2.0 * M_PI) -
         log_bessel_i(nu, lambda);
}

double kernel_norm(int m, double lambda) {
  if (m < 2) throw DomainError("kernel_norm: m must be >= 2");
  const double log_c = vmf_log_normalizer(m, lambda);
  const double log_ratio = log_surface_area(m - 1) - log_surface_area(m);
  const double p = 0.5 * (m - 2);
  // substitute t = 1 - s; the integrand is concentrated near s = 0 for large lambda
  auto log_integrand = [&](double s) {
    const double t = 1.0 - s;
    const double w = s * (2.0 - s);
    const double lw = p == 0.0 ? 0.0 : (w > 0.0 ? p * std::log(w) : -INFINITY);
    return log_c + lambda * t + lw + log_ratio;
  };
  // peak of exp(-lambda s) s^p sits at s = p/lambda
  const double s_peak = std::min(1.0, p / lambda);
  const double shift = log_integrand(std::max(s_peak, 1e-300));
  auto g = [&](double s) { return std::exp(log_integrand(s) - shift); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  double edges[] = {0.0, 0.0, 0.0, 0.0, 2.0};
  edges[1] = std::min(2.0, s_peak + 5.0 / lambda);
  edges[2] = std::min(2.0, s_peak + 50.0 / lambda);
  edges[3] = std::min(2.0, s_peak + 500.0 / lambda);
  for (int i = 0; i < 4; ++i) {
    if (edges[i + 1] <= edges[i]) continue;
    double err = 0.0;
    const double part = GK::integrate(g, edges[i], edges[i + 1], 20, 1e-14, &err);
    if (!std::isfinite(part) || err > 1e-9 * std::max(1.0, std::fabs(part)))
      throw NumericalFailure("kernel_norm: quadrature did not converge");
    total += part;
  }
  return total * std::exp(shift);
}

double kernel_eigenvalue(int m, int k, double lambda) {
  if (m < 2 || k < 0 || !(lambda > 0.0))
    throw DomainError("kernel_eigenvalue: need m >= 2, k >= 0, lambda > 0");
  const double alpha = 0.5 * (m - 1);
  double a = 1.0;
  for (int j = 0; j < k; ++j) a *= bessel_ratio(alpha + j, lambda);
  return a;
}

double kernel_eigenvalue_lower_bound(int m, int k, double lambda) {
  if (m < 2 || k < 0 || !(lambda > 0.0))
    throw DomainError("kernel_eigenvalue_lower_bound: need m >= 2, k >= 0, lambda > 0");
  const double v = 0.5 * (m - 1) + k;
  return std::pow(lambda / (v + std::sqrt(lambda * lambda + v * v)), k);
}

double kernel_log_eval(const VmfKernel& kern, double t) {
  if (!(t >= -1.0 && t <= 1.0)) throw DomainError("kernel_eval: t must be in [-1,1]");
  return kern.log_normalizer + kern.lambda * t;
}

double kernel_eval(const VmfKernel& kern, double t) { return std::exp(kernel_log_eval(kern, t)); }

ConvolutionEstimate convolve_vmf(const TargetFunction& f, const VmfKernel& kern,
                                 const SpherePoint& x, int n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw DomainError("convolve_vmf: n_samples must be >= 100");
  if (x.m() != kern.m) throw DimensionMismatch("convolve_vmf: dimension mismatch");
  return kernels::convolve_mc(f, kern, x, n_samples, seed, kernels::Exec::Parallel);
}

}  // namespace unihead
