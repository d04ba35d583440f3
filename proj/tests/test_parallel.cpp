#include <omp.h>

#include <cstring>

#include "doctest.h"
#include "unihead/parallel.hpp"
#include "unihead/prefix.hpp"

using namespace unihead;
using kernels::Exec;

namespace {
bool same(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
  auto f = make_target("identity", 3);
  auto cp = synthesize_prefix(f, 500, 12.0, 1);
  auto xs = uniform_sphere_sample(3, 3001, 2);
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    auto a = kernels::split_head_batch(cp, xs, Exec::Serial);
    auto b = kernels::split_head_batch(cp, xs, Exec::Parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    SphereMap approx = [&cp](const SpherePoint& x) { return split_head(cp, x); };
    auto es = kernels::error_over_points(f.eval, approx, xs, Exec::Serial);
    auto ep = kernels::error_over_points(f.eval, approx, xs, Exec::Parallel);
    CHECK(same(es.sup, ep.sup));
    CHECK(same(es.mean, ep.mean));
    CHECK(es.samples == 3001);

    CHECK(same(kernels::denominator_deviation(cp, xs, Exec::Serial),
               kernels::denominator_deviation(cp, xs, Exec::Parallel)));

    auto kern = make_vmf_kernel(3, 5.0);
    auto cs = kernels::convolve_mc(f, kern, xs[0], 20000, 7, Exec::Serial);
    auto cpar = kernels::convolve_mc(f, kern, xs[0], 20000, 7, Exec::Parallel);
    CHECK(cs.value == cpar.value);
    CHECK(cs.std_error == cpar.std_error);
  }
}

TEST_CASE("batched split head equals the scalar path") {
  auto cp = synthesize_prefix(make_target("vmf_bump", 2), 100, 8.0, 0);
  auto xs = uniform_sphere_sample(2, 50, 1);
  auto b = kernels::split_head_batch(cp, xs, Exec::Parallel);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(b[i] == split_head(cp, xs[i]));
}

TEST_CASE("thread count follows the environment") {
  setenv("UNIHEAD_THREADS", "3", 1);
  kernels::configure_threads_from_env();
  CHECK(kernels::thread_count() == 3);
  unsetenv("UNIHEAD_THREADS");
}
