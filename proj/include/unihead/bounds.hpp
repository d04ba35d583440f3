#pragma once

namespace unihead {

// Smoothness inputs of the approximation bounds. C_R and C_H have no
// computable value for a concrete f; defaults are placeholders (C_H is
// usually set to f_sup by the caller).
struct SmoothnessSpec {
  double L = 1.0;
  double C_H = 1.0;
  double C_R = 1.0;
  double f_sup = 1.0;

  void validate() const;
};

enum class BoundMode { Strict, Permissive };

struct BoundValue {
  double value = 0.0;
  bool overflow = false;    // value saturated to +inf
  bool permissive = false;  // evaluated for m < 8 where the covering bound needs m >= 8
};

// Lambda(sigma): the concentration giving ||f - K*f|| <= sigma.
BoundValue lambda_for_accuracy(double sigma, const SmoothnessSpec& spec, int m,
                               BoundMode mode = BoundMode::Strict);

struct PrefixLength {
  double log10N = 0.0;
  double N = 0.0;  // +inf once beyond double range
  bool permissive = false;
};

// N(lambda, eps) evaluated in log-domain.
PrefixLength prefix_length_bound(double lambda, double eps, const SmoothnessSpec& spec, int m,
                                 BoundMode mode = BoundMode::Strict);

// Covering constant Phi(m), m >= 8 (any m >= 2 with phi_unchecked).
double phi(int m);
double phi_unchecked(int m);

struct CoveringBounds {
  double lower = 0.0;
  double upper = 0.0;
  double log10_upper = 0.0;
};

CoveringBounds covering_bounds(int m, double delta);

struct NormalizedParameters {
  double sigma = 0.0;  // argument handed to Lambda
  double lambda = 0.0;
  double log10N = 0.0;
  bool lambda_overflow = false;
  bool permissive = false;
};

// Parameters of the normalized (softmax) head result: lambda = Lambda(2 eps L / (2L + f_sup)),
// N from the vector-valued bound at eps / sqrt(m+1).
NormalizedParameters theorem2_parameters(double eps, const SmoothnessSpec& spec, int m,
                                         BoundMode mode = BoundMode::Strict);

}  // namespace unihead
