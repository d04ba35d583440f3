#include "unihead/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "unihead/errors.hpp"
#include "unihead/targets.hpp"

namespace unihead::kernels {

namespace {

constexpr int kChunk = 1024;

int chunk_count(std::size_t n) { return static_cast<int>((n + kChunk - 1) / kChunk); }

double log_sum_exp(const Vec& l) {
  const double mx = l.maxCoeff();
  return mx + std::log((l.array() - mx).exp().sum());
}

double deviation_at(const ControlPoints& cp, const SpherePoint& x, double log_c) {
  Vec l(cp.size());
  for (std::size_t k = 0; k < cp.size(); ++k) l[k] = cp.lambda * cp.items[k].alpha.coords().dot(x.coords());
  const double log_stat = log_c - std::log(static_cast<double>(cp.size())) + log_sum_exp(l);
  return std::fabs(std::expm1(log_stat));
}

}  // namespace

std::vector<Vec> split_head_batch(const ControlPoints& cp, const std::vector<SpherePoint>& xs,
                                  Exec exec) {
  std::vector<Vec> out(xs.size());
  const long n = static_cast<long>(xs.size());
  if (exec == Exec::Serial) {
    for (long i = 0; i < n; ++i) out[i] = split_head(cp, xs[i]);
    return out;
  }
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = split_head(cp, xs[i]);
  return out;
}

ErrorStats error_over_points(const SphereMap& f, const SphereMap& approx,
                             const std::vector<SpherePoint>& xs, Exec exec) {
  ErrorStats st;
  st.samples = static_cast<int>(xs.size());
  if (xs.empty()) return st;
  // Both paths sum inside fixed chunks and merge chunks in order, so the
  // serial reference and the OpenMP path agree bit for bit.
  const int chunks = chunk_count(xs.size());
  std::vector<double> sums(chunks, 0.0), sups(chunks, 0.0);
  auto run_chunk = [&](int c) {
    const std::size_t end = std::min(xs.size(), static_cast<std::size_t>(c + 1) * kChunk);
    double s = 0.0, mx = 0.0;
    for (std::size_t i = static_cast<std::size_t>(c) * kChunk; i < end; ++i) {
      const double e = (f(xs[i]) - approx(xs[i])).norm();
      mx = std::max(mx, e);
      s += e;
    }
    sums[c] = s;
    sups[c] = mx;
  };
  if (exec == Exec::Serial) {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  }
  double sum = 0.0;
  for (int c = 0; c < chunks; ++c) {
    sum += sums[c];
    st.sup = std::max(st.sup, sups[c]);
  }
  st.mean = sum / xs.size();
  return st;
}

ConvolutionEstimate convolve_mc(const TargetFunction& f, const VmfKernel& kern,
                                const SpherePoint& x, int n_samples, std::uint64_t seed,
                                Exec exec) {
  const auto ys = uniform_sphere_sample(kern.m, n_samples, seed);
  const Eigen::Index e = f(ys.front()).size();
  const int chunks = chunk_count(ys.size());
  std::vector<Vec> s1(chunks, Vec::Zero(e)), s2(chunks, Vec::Zero(e));
  auto run_chunk = [&](int c) {
    const std::size_t end = std::min(ys.size(), static_cast<std::size_t>(c + 1) * kChunk);
    for (std::size_t i = static_cast<std::size_t>(c) * kChunk; i < end; ++i) {
      const double t = std::clamp(x.coords().dot(ys[i].coords()), -1.0, 1.0);
      const Vec v = kernel_eval(kern, t) * f(ys[i]);
      s1[c] += v;
      s2[c] += v.cwiseProduct(v);
    }
  };
  if (exec == Exec::Serial) {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  }
  Vec sum = Vec::Zero(e), sq = Vec::Zero(e);
  for (int c = 0; c < chunks; ++c) {
    sum += s1[c];
    sq += s2[c];
  }
  const double n = n_samples;
  ConvolutionEstimate out;
  out.value = sum / n;
  const Vec var = ((sq / n).array() - out.value.array().square()).max(0.0) * (n / (n - 1.0));
  out.std_error = (var / n).cwiseSqrt();
  return out;
}

double denominator_deviation(const ControlPoints& cp, const std::vector<SpherePoint>& xs,
                             Exec exec) {
  const double log_c = vmf_log_normalizer(cp.m, cp.lambda);
  const long n = static_cast<long>(xs.size());
  double sup = 0.0;
  if (exec == Exec::Serial) {
    for (long i = 0; i < n; ++i) sup = std::max(sup, deviation_at(cp, xs[i], log_c));
    return sup;
  }
#pragma omp parallel for reduction(max : sup) schedule(static)
  for (long i = 0; i < n; ++i) sup = std::max(sup, deviation_at(cp, xs[i], log_c));
  return sup;
}

void configure_threads_from_env() {
  if (const char* s = std::getenv("UNIHEAD_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) omp_set_num_threads(n);
  }
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace unihead::kernels
