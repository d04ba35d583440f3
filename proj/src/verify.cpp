#include "unihead/verify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "unihead/attention.hpp"
#include "unihead/bounds.hpp"
#include "unihead/errors.hpp"
#include "unihead/kernel.hpp"
#include "unihead/prefix.hpp"
#include "unihead/rng.hpp"
#include "unihead/seq2seq.hpp"
#include "unihead/specialfn.hpp"
#include "unihead/targets.hpp"

namespace unihead {

VerifyHooks::VerifyHooks() : eigenvalue(kernel_eigenvalue) {}

std::vector<std::string> fault_names() { return {"eigenvalue-sign"}; }

VerifyHooks inject_fault(const std::string& name) {
  VerifyHooks h;
  if (name == "eigenvalue-sign")
    h.eigenvalue = [](int m, int k, double lambda) {
      const double a = kernel_eigenvalue(m, k, lambda);
      return k % 2 == 1 ? -a : a;
    };
  else
    throw DomainError("unknown fault '" + name + "'");
  return h;
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  int pass = 0;
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    pass += c.passed ? 1 : 0;
    arr.push_back({{"suite", c.suite}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail},
                   {"seconds", c.seconds}});
  }
  j["passed"] = pass;
  j["failed"] = static_cast<int>(checks.size()) - pass;
  j["seconds"] = seconds;
  j["checks"] = arr;
  return j;
}

std::vector<std::string> verify_suites() { return {"kernel", "bounds", "attention", "prefix", "seq2seq", "all"}; }

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

class Runner {
 public:
  Runner(std::string suite, VerifyReport& rep) : suite_(std::move(suite)), rep_(rep) {}

  template <class F>
  void check(const std::string& name, F&& fn) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.suite = suite_;
    r.name = name;
    try {
      const Outcome o = fn();
      r.passed = o.ok;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    rep_.checks.push_back(std::move(r));
  }

 private:
  std::string suite_;
  VerifyReport& rep_;
};

ControlPoints random_control_points(int m, int N, double lambda, std::uint64_t seed) {
  ControlPoints cp;
  cp.m = m;
  cp.lambda = lambda;
  auto eng = make_engine(derive_seed(seed, 1));
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const auto& a : uniform_sphere_sample(m, N, derive_seed(seed, 2))) {
    Vec b(m + 1);
    for (int j = 0; j <= m; ++j) b[j] = U(eng);
    cp.items.push_back({a, b});
  }
  return cp;
}

// max over xs of |project(classical(lift x)) - split(x)| / |split(x)|
double classical_split_discrepancy(const ControlPoints& cp, double M,
                                   const std::vector<SpherePoint>& xs) {
  const PrefixTokens pt = assemble_prefix_tokens(cp, M, false);
  const AttentionHeadParams h = build_universal_head(cp.m, M, false);
  double worst = 0.0;
  for (const auto& x : xs) {
    const Vec c = project(classical_head({lift(x, false)}, pt, h).front());
    const Vec s = split_head(cp, x);
    worst = std::max(worst, (c - s).norm() / s.norm());
  }
  return worst;
}

TargetFunction harmonic(int k) {
  TargetFunction f;
  f.name = "harmonic" + std::to_string(k);
  f.m = 2;
  f.eval = [k](const SpherePoint& x) {
    const double v = k == 0 ? 1.0 : k == 1 ? x[0] : x[0] * x[1];
    return Vec(Vec::Constant(1, v));
  };
  return f;
}

void kernel_suite(Runner& R, const VerifyHooks& hooks, std::uint64_t seed) {
  R.check("partition_measures", [] {
    double worst_sum = 0.0, worst_eq = 0.0;
    for (int m : {1, 2, 3, 4})
      for (int N : {1, 3, 64, 500}) {
        const Partition p = equal_area_partition(m, N, 0);
        const double w = surface_area(m);
        double s = 0.0;
        for (const auto& c : p.cells) {
          s += c.measure;
          worst_eq = std::max(worst_eq, std::fabs(c.measure - w / N) / (w / N));
        }
        worst_sum = std::max(worst_sum, std::fabs(s - w) / w);
      }
    return Outcome{worst_sum <= 1e-6 && worst_eq <= 1e-9,
                   "sum rel " + fmt(worst_sum) + ", equal-measure rel " + fmt(worst_eq)};
  });
  R.check("geodesic_metric", [seed] {
    const auto xs = uniform_sphere_sample(3, 3000, derive_seed(seed, 11));
    double worst = 0.0;
    for (std::size_t i = 0; i + 2 < xs.size(); i += 3) {
      const double ab = geodesic_distance(xs[i], xs[i + 1]), ba = geodesic_distance(xs[i + 1], xs[i]);
      const double bc = geodesic_distance(xs[i + 1], xs[i + 2]), ac = geodesic_distance(xs[i], xs[i + 2]);
      worst = std::max({worst, std::fabs(ab - ba), ac - (ab + bc)});
    }
    return Outcome{worst <= 1e-9, "worst violation " + fmt(worst)};
  });
  R.check("stereographic_unit_norm", [seed] {
    auto eng = make_engine(derive_seed(seed, 12));
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> sc(-6.0, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      Vec y(3);
      for (int j = 0; j < 3; ++j) y[j] = g(eng);
      y *= std::pow(10.0, sc(eng));
      worst = std::max(worst, std::fabs(stereographic_inverse(y).coords().norm() - 1.0));
    }
    return Outcome{worst <= 1e-12, "max | |x| - 1 | = " + fmt(worst)};
  });
  R.check("bessel_ratio_decreasing_in_order", [] {
    int bad = 0;
    for (double lam : {0.1, 1.0, 10.0, 100.0, 1000.0})
      for (double nu = 0.0; nu < 20.0; nu += 0.5)
        if (bessel_ratio(nu + 1.0, lam) > bessel_ratio(nu, lam)) ++bad;
    return Outcome{bad == 0, std::to_string(bad) + " violations"};
  });
  R.check("log_bessel_matches_ratio", [] {
    double worst = 0.0;
    for (double lam : {0.1, 1.0, 10.0, 100.0, 1000.0})
      for (double nu = 0.0; nu < 20.0; nu += 0.5) {
        const double r = std::exp(log_bessel_i(nu + 1.0, lam) - log_bessel_i(nu, lam));
        worst = std::max(worst, std::fabs(r / bessel_ratio(nu, lam) - 1.0));
      }
    return Outcome{worst <= 1e-8, "max rel " + fmt(worst)};
  });
  R.check("gegenbauer_quadrature_eigenvalues", [&hooks] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const int m = 2;
    const double alpha = 0.5 * (m - 1);
    double worst = 0.0;
    for (double lam : {0.5, 1.0, 5.0, 20.0}) {
      const double lc = vmf_log_normalizer(m, lam);
      const double ratio = std::exp(log_surface_area(m - 1) - log_surface_area(m));
      for (int k = 0; k <= 4; ++k) {
        const double ck1 = gegenbauer(k, alpha, 1.0);
        auto g = [&](double t) {
          return std::exp(lc + lam * t) * gegenbauer(k, alpha, t) / ck1 *
                 std::pow(1.0 - t * t, 0.5 * (m - 2));
        };
        const double q = ratio * GK::integrate(g, -1.0, 1.0, 15, 1e-14);
        worst = std::max(worst, std::fabs(q - hooks.eigenvalue(m, k, lam)));
      }
    }
    return Outcome{worst <= 1e-6, "max abs " + fmt(worst)};
  });
  R.check("eigenvalue_sandwich_and_decrease", [&hooks] {
    int bad = 0;
    for (int m : {8, 12})
      for (double lam : {1.0, 10.0, 100.0})
        for (int k = 0; k <= 10; ++k) {
          const double a = hooks.eigenvalue(m, k, lam);
          if (!(kernel_eigenvalue_lower_bound(m, k, lam) <= a * (1.0 + 1e-12) && a <= 1.0)) ++bad;
          if (k > 0 && !(a < hooks.eigenvalue(m, k - 1, lam))) ++bad;
        }
    return Outcome{bad == 0, std::to_string(bad) + " violations"};
  });
  R.check("kernel_norm_unity", [] {
    double worst = 0.0;
    for (int m : {2, 8, 16})
      for (double lam : {1.0, 10.0, 100.0}) worst = std::max(worst, std::fabs(kernel_norm(m, lam) - 1.0));
    return Outcome{worst <= 1e-6, "max |norm - 1| = " + fmt(worst)};
  });
  R.check("funk_hecke_monte_carlo", [&hooks, seed] {
    const double lam = 10.0;
    const VmfKernel K = make_vmf_kernel(2, lam);
    const auto xs = uniform_sphere_sample(2, 5, derive_seed(seed, 13));
    double worst = 0.0;
    for (int k = 0; k <= 2; ++k) {
      const TargetFunction f = harmonic(k);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto est = convolve_vmf(f, K, xs[i], 200000, derive_seed(seed, 100 + 10 * k + i));
        const double want = hooks.eigenvalue(2, k, lam) * f(xs[i])[0];
        worst = std::max(worst, std::fabs(est.value[0] - want) / (est.std_error[0] + 1e-300));
      }
    }
    return Outcome{worst <= 4.0, "max deviation " + fmt(worst) + " standard errors"};
  });
  R.check("kernel_modulus_of_continuity", [] {
    const double dt = 1e-3;
    double worst = -INFINITY;
    for (int m : {2, 8})
      for (double lam : {1.0, 10.0, 100.0, 1000.0}) {
        const VmfKernel K = make_vmf_kernel(m, lam);
        const double log_bound = std::log(lam) + K.log_normalizer + lam + std::log(dt);
        for (double t = -1.0; t + dt <= 1.0 + 1e-12; t += dt) {
          const double t1 = std::min(1.0, t + dt);
          const double log_diff = kernel_log_eval(K, t1) + std::log(-std::expm1(-lam * (t1 - t)));
          worst = std::max(worst, log_diff - log_bound);
        }
      }
    return Outcome{worst <= 1e-12, "max log(diff / bound) = " + fmt(worst)};
  });
  R.check("change_of_variables", [seed] {
    const int m = 2;
    const VmfKernel K = make_vmf_kernel(m, 5.0);
    const SpherePoint x = uniform_sphere_sample(m, 1, derive_seed(seed, 14)).front();
    TargetFunction one;
    one.m = m;
    one.eval = [](const SpherePoint&) { return Vec(Vec::Ones(1)); };
    const auto est = convolve_vmf(one, K, x, 200000, derive_seed(seed, 15));
    const double dev = std::fabs(est.value[0] - kernel_norm(m, 5.0)) / est.std_error[0];
    return Outcome{dev <= 4.0, "deviation " + fmt(dev) + " standard errors"};
  });
}

void bounds_suite(Runner& R) {
  R.check("lambda_quartic_asymptote", [] {
    SmoothnessSpec s{1.0, 1.0, 1.0, 1.0};
    const double eps = 1e-4;
    const double r = lambda_for_accuracy(eps, s, 8).value * std::pow(eps, 4) / 128.0;
    return Outcome{r >= 0.99 && r <= 1.01, "ratio " + fmt(r)};
  });
  R.check("prefix_length_exponent", [] {
    SmoothnessSpec s{1.0, 1.0, 1.0, 1.0};
    double worst = 0.0;
    for (int m : {8, 12})
      for (double eps : {0.5, 0.1, 0.01}) {
        const double a = prefix_length_bound(10.0, eps, s, m).log10N;
        const double b = prefix_length_bound(10.0, eps / 10.0, s, m).log10N;
        worst = std::max(worst, std::fabs((b - a) - 2.0 * (m + 1)));
      }
    return Outcome{worst <= 1e-9, "max slope error " + fmt(worst)};
  });
  R.check("covering_sandwich", [] {
    int bad = 0;
    for (int m = 8; m <= 16; ++m)
      for (double delta : {0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto c = covering_bounds(m, delta);
        if (!(c.lower <= c.upper)) ++bad;
      }
    const double at_one = covering_bounds(8, 1.0).lower;
    return Outcome{bad == 0 && std::fabs(at_one - 2.0) <= 1e-12,
                   std::to_string(bad) + " violations, lower(delta=1) = " + fmt(at_one)};
  });
  R.check("strict_mode_rejects_small_m", [] {
    SmoothnessSpec s{1.0, 1.0, 1.0, 1.0};
    try {
      lambda_for_accuracy(0.1, s, 4);
    } catch (const DomainError&) {
      const auto p = lambda_for_accuracy(0.1, s, 4, BoundMode::Permissive);
      return Outcome{p.permissive, "strict throws, permissive flags"};
    }
    return Outcome{false, "strict mode accepted m = 4"};
  });
}

void attention_suite(Runner& R, std::uint64_t seed) {
  R.check("classical_equals_split_finite_M", [seed] {
    const ControlPoints cp = random_control_points(4, 128, 32.0, derive_seed(seed, 21));
    const auto xs = uniform_sphere_sample(4, 100, derive_seed(seed, 22));
    double beta_max = 0.0;
    for (const auto& it : cp.items) beta_max = std::max(beta_max, it.beta.cwiseAbs().maxCoeff());
    std::vector<double> disc;
    bool within = true;
    for (double M : {-1.0, -1.0 - std::log(10.0), -1.0 - 2.0 * std::log(10.0)}) {
      const PrefixTokens pt = assemble_prefix_tokens(cp, M, false);
      const AttentionHeadParams h = build_universal_head(4, M, false);
      double worst = 0.0;
      for (const auto& x : xs) {
        const double d = (project(classical_head({lift(x, false)}, pt, h).front()) - split_head(cp, x)).norm();
        worst = std::max(worst, d);
      }
      within = within && worst <= std::sqrt(5.0) * beta_max * std::exp(M + cp.lambda) / cp.size();
      disc.push_back(worst);
    }
    const bool shrink = disc[0] >= 9.0 * disc[1] && disc[1] >= 9.0 * disc[2];
    const double rel = classical_split_discrepancy(cp, default_suppression(cp.lambda, cp.size()), xs);
    return Outcome{within && shrink && rel <= 1e-10, "discrepancies " + fmt(disc[0]) + ", " + fmt(disc[1]) + ", " +
                                                         fmt(disc[2]) + "; relative at default M " + fmt(rel)};
  });
  R.check("split_head_convex_hull", [seed] {
    const ControlPoints cp = random_control_points(3, 64, 20.0, derive_seed(seed, 23));
    Vec lo = cp.items.front().beta, hi = lo;
    for (const auto& it : cp.items) {
      lo = lo.cwiseMin(it.beta);
      hi = hi.cwiseMax(it.beta);
    }
    int bad = 0;
    for (const auto& x : uniform_sphere_sample(3, 500, derive_seed(seed, 24))) {
      const Vec y = split_head(cp, x);
      if (((y - lo).array() < -1e-12).any() || ((hi - y).array() < -1e-12).any()) ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + " points outside the hull"};
  });
  R.check("element_wise_extension", [seed] {
    const ControlPoints cp = random_control_points(2, 256, 16.0, derive_seed(seed, 25));
    const ExtendedHead eh = element_wise_extend(cp, default_suppression(cp.lambda, cp.size()));
    const auto xs = uniform_sphere_sample(2, 8, derive_seed(seed, 26));
    const auto joint = element_wise_eval(eh, xs);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      worst = std::max(worst, (joint[i] - element_wise_eval(eh, {xs[i]}).front()).norm());
    return Outcome{worst <= 1e-10, "max difference " + fmt(worst)};
  });
  R.check("finite_at_large_lambda", [seed] {
    bool ok = true;
    for (double lam : {500.0, 5000.0}) {
      const ControlPoints cp = random_control_points(2, 128, lam, derive_seed(seed, 27));
      const double M = default_suppression(lam, cp.size());
      const PrefixTokens pt = assemble_prefix_tokens(cp, M, false);
      const AttentionHeadParams h = build_universal_head(2, M, false);
      for (const auto& x : uniform_sphere_sample(2, 50, derive_seed(seed, 28))) {
        ok = ok && split_head(cp, x).allFinite() && core_head_scaled(cp, x).mantissa.allFinite() &&
             classical_head({lift(x, false)}, pt, h).front().allFinite();
      }
    }
    return Outcome{ok, ok ? "all finite" : "non-finite output"};
  });
}

void prefix_suite(Runner& R, std::uint64_t seed) {
  R.check("constant_target_exact", [seed] {
    const TargetFunction f = make_target("constant", 2);
    double worst = 0.0;
    for (int N : {1, 16, 256})
      for (double lam : {1.0, 100.0}) worst = std::max(worst, approximate_budget(f, N, lam, 256, seed).sup_error);
    return Outcome{worst == 0.0, "max sup error " + fmt(worst)};
  });
  R.check("sup_error_decreasing_in_N", [seed] {
    const TargetFunction f = make_target("identity", 2);
    bool ok = true;
    std::string det;
    for (double lam : {8.0, 32.0}) {
      double prev = INFINITY;
      for (int N : {64, 256, 1024, 4096}) {
        const double e = approximate_budget(f, N, lam, 2048, seed).sup_error;
        ok = ok && e < prev;
        prev = e;
        det += fmt(e) + " ";
      }
      det += "| ";
    }
    return Outcome{ok, det};
  });
  R.check("convolution_consistency", [seed] {
    const TargetFunction f = make_target("identity", 2);
    const double lam = 10.0;
    const ControlPoints cp = synthesize_prefix(f, 8192, lam, 0);
    const VmfKernel K = make_vmf_kernel(2, lam);
    double worst = 0.0;
    const auto xs = uniform_sphere_sample(2, 20, derive_seed(seed, 31));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto est = convolve_vmf(f, K, xs[i], 100000, derive_seed(seed, 200 + i));
      worst = std::max(worst, (split_head(cp, xs[i]) - est.value).cwiseAbs().maxCoeff());
    }
    return Outcome{worst <= 0.03, "max abs difference " + fmt(worst)};
  });
  R.check("prefix_norm_grows_with_lambda", [] {
    const TargetFunction f = make_target("identity", 2);
    double prev = -1.0;
    bool ok = true;
    for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      const PrefixTokens pt = assemble_prefix_tokens(synthesize_prefix(f, 16, lam, 0), -1.0, false);
      double mn = INFINITY;
      for (const auto& t : pt.tokens) mn = std::min(mn, t.segment(3, 3).norm());
      ok = ok && mn > prev;
      prev = mn;
    }
    return Outcome{ok, ok ? "strictly increasing" : "not monotone"};
  });
  R.check("denominator_constancy_improves", [seed] {
    const TargetFunction f = make_target("identity", 2);
    double prev = INFINITY;
    bool ok = true;
    std::string det;
    for (int N : {256, 1024, 4096}) {
      const double dev = verify_denominator_constancy(synthesize_prefix(f, N, 8.0, 0), 2048, derive_seed(seed, 32));
      ok = ok && dev < prev;
      prev = dev;
      det += fmt(dev) + " ";
    }
    return Outcome{ok, det};
  });
}

SequenceSample random_sample(int T, int m, Engine& eng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SequenceSample s;
  s.T = T;
  s.m = m;
  for (int i = 0; i < T; ++i) {
    Vec x(m + 1);
    for (int p = 0; p <= m; ++p) x[p] = U(eng);
    s.elements.push_back(x);
  }
  return s;
}

Vec truncate_vec(const Vec& x, const DigitConfig& cfg) {
  Vec y(x.size());
  for (Eigen::Index p = 0; p < x.size(); ++p) y[p] = psi_decode(psi_encode(x[p], cfg), cfg);
  return y;
}

void seq2seq_suite(Runner& R, std::uint64_t seed) {
  R.check("psi_monotone", [] {
    int bad = 0;
    for (bool term : {true, false})
      for (int digits : {4, 8, 20}) {
        DigitConfig cfg{digits, term};
        double prev = -1.0;
        for (int i = 0; i <= 10000; ++i) {
          const double v = psi_encode(i / 10000.0, cfg);
          if (v < prev) ++bad;
          prev = v;
        }
      }
    return Outcome{bad == 0, std::to_string(bad) + " decreases"};
  });
  R.check("aggregate_round_trip_injective", [seed] {
    auto eng = make_engine(derive_seed(seed, 41));
    int bad = 0, cases = 0;
    for (int T = 1; T <= 4; ++T)
      for (int m = 0; m <= 2; ++m)
        for (int digits = 1; digits <= 6; ++digits) {
          const DigitConfig cfg{digits, true};
          std::set<std::string> seen_R;
          std::set<std::vector<double>> seen_x;
          for (int n = 0; n < 20; ++n) {
            const SequenceSample s = random_sample(T, m, eng);
            const AggregateR Rv = aggregate_R(s, cfg);
            const SequenceSample back = decode_sequence(Rv, T, m, cfg);
            std::vector<double> key;
            for (int i = 0; i < T; ++i) {
              const Vec t = truncate_vec(s.elements[i], cfg);
              if (t != back.elements[i]) ++bad;
              key.insert(key.end(), t.data(), t.data() + t.size());
            }
            seen_R.insert(Rv.ternary());
            seen_x.insert(key);
            ++cases;
          }
          if (seen_R.size() != seen_x.size()) ++bad;
        }
    return Outcome{bad == 0, std::to_string(bad) + " failures over " + std::to_string(cases) + " samples"};
  });
  R.check("layer_count", [] {
    const auto f = make_sequence_function("mean");
    bool ok = true;
    for (int T = 1; T <= 4; ++T)
      ok = ok && build_seq2seq_transformer(f, T, 0, DigitConfig{2, true}, Seq2SeqMode::Hybrid)
                         .stack.attention_layer_count() == static_cast<std::size_t>(T + 2);
    Seq2SeqOptions small;
    small.N = 64;
    small.lambda = 100.0;
    for (int T = 1; T <= 3; ++T)
      ok = ok && build_seq2seq_transformer(f, T, 0, DigitConfig{2, true}, Seq2SeqMode::Full, small)
                         .stack.attention_layer_count() == static_cast<std::size_t>(T + 2);
    return Outcome{ok, ok ? "T+2 for every T" : "wrong layer count"};
  });
  R.check("summation_head_equals_R", [seed] {
    auto eng = make_engine(derive_seed(seed, 42));
    double worst = 0.0;
    for (auto [T, m, digits] : {std::tuple{2, 1, 4}, std::tuple{3, 0, 3}, std::tuple{1, 1, 5}, std::tuple{4, 0, 2}}) {
      const DigitConfig cfg{digits, true};
      const auto model = build_seq2seq_transformer(make_sequence_function("mean"), T, m, cfg, Seq2SeqMode::Hybrid);
      for (int n = 0; n < 50; ++n) {
        const SequenceSample s = random_sample(T, m, eng);
        std::vector<std::vector<Vec>> trace;
        transformer_eval_trace(model.stack, model.embed(s), &trace);
        const double Rv = aggregate_R(s, cfg).value();
        for (const auto& tok : trace[1]) worst = std::max(worst, std::fabs(tok[model.layout.RS] - Rv));
      }
    }
    return Outcome{worst <= 1e-12, "max |R_head - R| = " + fmt(worst)};
  });
  R.check("hybrid_matches_reference", [seed] {
    auto eng = make_engine(derive_seed(seed, 43));
    const DigitConfig cfg{4, true};
    double worst = 0.0;
    for (const auto& name : sequence_function_names()) {
      const auto f = make_sequence_function(name);
      const auto model = build_seq2seq_transformer(f, 2, 1, cfg, Seq2SeqMode::Hybrid);
      for (int n = 0; n < 50; ++n) {
        const SequenceSample s = random_sample(2, 1, eng);
        const auto ref = reference_seq2seq(f, s, cfg);
        const auto out = model.run(s);
        for (int i = 0; i < 2; ++i) worst = std::max(worst, (ref[i] - out[i]).norm());
      }
    }
    return Outcome{worst <= 1e-9, "max difference " + fmt(worst)};
  });
  R.check("truncation_error_bound", [seed] {
    auto eng = make_engine(derive_seed(seed, 44));
    double worst = -INFINITY;
    for (const char* name : {"identity", "mean"})
      for (int digits : {2, 4, 8}) {
        const DigitConfig cfg{digits, true};
        const auto f = make_sequence_function(name);
        for (int n = 0; n < 50; ++n) {
          const SequenceSample s = random_sample(3, 2, eng);
          const auto ref = reference_seq2seq(f, s, cfg);
          const auto exact = f(s.elements);
          const double bound = std::sqrt(3.0) * std::ldexp(1.0, -digits);
          for (int i = 0; i < 3; ++i) worst = std::max(worst, (ref[i] - exact[i]).norm() - bound);
        }
      }
    return Outcome{worst <= 1e-15, "max excess over bound " + fmt(worst)};
  });
  R.check("full_mode_grid", [] {
    const auto f = make_sequence_function("mean");
    const DigitConfig cfg{2, true};
    const auto model = build_seq2seq_transformer(f, 2, 0, cfg, Seq2SeqMode::Full);
    double worst = 0.0;
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        SequenceSample s;
        s.T = 2;
        s.m = 0;
        s.elements = {Vec::Constant(1, a / 8.0 + 1.0 / 16.0), Vec::Constant(1, b / 8.0 + 1.0 / 16.0)};
        const auto ref = reference_seq2seq(f, s, cfg);
        const auto out = model.run(s);
        for (int i = 0; i < 2; ++i) worst = std::max(worst, (ref[i] - out[i]).norm());
      }
    return Outcome{worst <= 1e-6, "sup error over 64 grid sequences " + fmt(worst)};
  });
}

}  // namespace

VerifyReport run_verify(const std::string& suite, const VerifyHooks& hooks, std::uint64_t seed) {
  const auto names = verify_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw DomainError("unknown suite '" + suite + "'");
  const auto t0 = Clock::now();
  VerifyReport rep;
  const bool all = suite == "all";
  if (all || suite == "kernel") {
    Runner r("kernel", rep);
    kernel_suite(r, hooks, seed);
  }
  if (all || suite == "bounds") {
    Runner r("bounds", rep);
    bounds_suite(r);
  }
  if (all || suite == "attention") {
    Runner r("attention", rep);
    attention_suite(r, seed);
  }
  if (all || suite == "prefix") {
    Runner r("prefix", rep);
    prefix_suite(r, seed);
  }
  if (all || suite == "seq2seq") {
    Runner r("seq2seq", rep);
    seq2seq_suite(r, seed);
  }
  rep.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

}  // namespace unihead
