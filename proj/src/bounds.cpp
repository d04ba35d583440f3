#include "unihead/bounds.hpp"

#include <cmath>
#include <limits>

#include "unihead/errors.hpp"
#include "unihead/kernel.hpp"
#include "unihead/specialfn.hpp"

namespace unihead {

namespace {

constexpr double kLn10 = 2.302585092994045684;

bool check_m(int m, BoundMode mode) {
  if (m >= 8) return false;
  if (mode == BoundMode::Strict) throw DomainError("bounds: covering constants require m >= 8");
  if (m < 2) throw DomainError("bounds: m must be >= 2");
  return true;
}

double log_lambda(double sigma, const SmoothnessSpec& s, int m) {
  const double a = sigma * sigma / (8.0 * s.L * s.C_H * s.C_R + 2.0 * sigma * s.C_H);
  if (!(a < 1.0)) throw DomainError("lambda_for_accuracy: sigma too large for the bound");
  const double e = sigma / (4.0 * s.L * s.C_R + sigma);
  const double l1 = std::log1p(-a);
  const double log_num = std::log(8.0 * s.L * s.C_R + (m + 1.0) * sigma) + e * l1;
  const double den = -std::expm1(2.0 * e * l1);
  return log_num - std::log(sigma) - std::log(den);
}

// ln of N(lambda, eps) with an extra factor `inner` inside the bracket.
double log_prefix_length(double lambda, double eps, const SmoothnessSpec& s, int m, double inner) {
  const double log_c = vmf_log_normalizer(m, lambda);
  return std::log(phi_unchecked(m)) +
         2.0 * (m + 1.0) *
             (std::log(3.0 * M_PI) + std::log(s.L + lambda * s.f_sup) + std::log(inner) + log_c +
              lambda - std::log(eps));
}

}  // namespace

void SmoothnessSpec::validate() const {
  if (!(L > 0.0) || !(C_H > 0.0) || !(C_R > 0.0) || !(f_sup >= 0.0))
    throw DomainError("SmoothnessSpec: L, C_H, C_R must be > 0 and f_sup >= 0");
}

double phi_unchecked(int m) {
  const double n = m + 1.0;
  return M_E * (n * std::log(n) + n * std::log(std::log(n)) + 5.0 * n);
}

double phi(int m) {
  if (m < 8) throw DomainError("phi: requires m >= 8");
  return phi_unchecked(m);
}

BoundValue lambda_for_accuracy(double sigma, const SmoothnessSpec& spec, int m, BoundMode mode) {
  spec.validate();
  if (!(sigma > 0.0)) throw DomainError("lambda_for_accuracy: sigma must be > 0");
  BoundValue out;
  out.permissive = check_m(m, mode);
  const double ll = log_lambda(sigma, spec, m);
  if (!(ll < std::log(std::numeric_limits<double>::max()))) {
    out.value = std::numeric_limits<double>::infinity();
    out.overflow = true;
  } else {
    out.value = std::exp(ll);
  }
  return out;
}

PrefixLength prefix_length_bound(double lambda, double eps, const SmoothnessSpec& spec, int m,
                                 BoundMode mode) {
  spec.validate();
  if (!(lambda > 0.0) || !(eps > 0.0))
    throw DomainError("prefix_length_bound: lambda and eps must be > 0");
  PrefixLength out;
  out.permissive = check_m(m, mode);
  const double ln = log_prefix_length(lambda, eps, spec, m, 1.0);
  out.log10N = ln / kLn10;
  out.N = ln < std::log(std::numeric_limits<double>::max()) ? std::exp(ln)
                                                            : std::numeric_limits<double>::infinity();
  return out;
}

CoveringBounds covering_bounds(int m, double delta) {
  if (m < 8) throw DomainError("covering_bounds: requires m >= 8");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("covering_bounds: delta must be in (0,1]");
  const double s2 = delta * (2.0 - delta);
  CoveringBounds b;
  b.lower = 2.0 / reg_inc_beta(std::min(1.0, s2), 0.5 * m, 0.5);
  const double log_upper = std::log(phi(m)) - 0.5 * (m + 1.0) * std::log(s2);
  b.log10_upper = log_upper / kLn10;
  b.upper = std::exp(log_upper);
  return b;
}

NormalizedParameters theorem2_parameters(double eps, const SmoothnessSpec& spec, int m,
                                         BoundMode mode) {
  spec.validate();
  if (!(eps > 0.0) || !(eps < 2.0 * spec.f_sup))
    throw DomainError("theorem2_parameters: need 0 < eps < 2 f_sup");
  NormalizedParameters out;
  out.sigma = 2.0 * eps * spec.L / (2.0 * spec.L + spec.f_sup);
  const BoundValue lam = lambda_for_accuracy(out.sigma, spec, m, mode);
  out.lambda = lam.value;
  out.lambda_overflow = lam.overflow;
  out.permissive = lam.permissive;
  if (lam.overflow) {
    out.log10N = std::numeric_limits<double>::infinity();
  } else {
    out.log10N = log_prefix_length(out.lambda, eps, spec, m, std::sqrt(m + 1.0)) / kLn10;
  }
  return out;
}

}  // namespace unihead
