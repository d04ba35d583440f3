#pragma once

namespace unihead {

// Order of a modified Bessel function of the first kind. Finite and >= 0.
struct BesselOrder {
  double nu;
  BesselOrder(double v);  // NOLINT: implicit on purpose, orders are plain numbers at call sites
};

double log_gamma(double x);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

// Gegenbauer polynomial C_k^alpha(t) by three-term recurrence.
double gegenbauer(int k, double alpha, double t);

// ln I_nu(x). Power series for small x, Hankel expansion for large x.
double log_bessel_i(BesselOrder nu, double x);

// I_{nu+1}(x) / I_nu(x).
double bessel_ratio(BesselOrder nu, double x);

// Amos lower bound x / ((nu+1) + sqrt(x^2 + (nu+1)^2)) on the ratio above.
double bessel_ratio_lower_bound(double nu, double x);

}  // namespace unihead
