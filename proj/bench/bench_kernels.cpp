// Serial reference vs OpenMP kernels. Thread count follows UNIHEAD_THREADS.

#include <benchmark/benchmark.h>

#include <map>

#include "unihead/kernel.hpp"
#include "unihead/parallel.hpp"
#include "unihead/prefix.hpp"
#include "unihead/targets.hpp"

using namespace unihead;
using kernels::Exec;

namespace {

const TargetFunction& target() {
  static const auto f = make_target("identity", 2);
  return f;
}

const ControlPoints& control(int N) {
  static std::map<int, ControlPoints> cache;
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, synthesize_prefix(target(), N, 32.0, 1)).first;
  return it->second;
}

const std::vector<SpherePoint>& points() {
  static const auto xs = uniform_sphere_sample(2, 4096, 2);
  return xs;
}

template <Exec E>
void BM_split_head_batch(benchmark::State& st) {
  const auto& cp = control(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::split_head_batch(cp, points(), E));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(points().size()) * st.range(0));
}

template <Exec E>
void BM_error_over_points(benchmark::State& st) {
  const auto& cp = control(static_cast<int>(st.range(0)));
  const SphereMap approx = [&](const SpherePoint& x) { return split_head(cp, x); };
  for (auto _ : st) benchmark::DoNotOptimize(kernels::error_over_points(target().eval, approx, points(), E));
}

template <Exec E>
void BM_convolve_mc(benchmark::State& st) {
  const auto kern = make_vmf_kernel(2, 10.0);
  const auto x = points().front();
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::convolve_mc(target(), kern, x, static_cast<int>(st.range(0)), 7, E));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_split_head_batch<Exec::Serial>)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_split_head_batch<Exec::Parallel>)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_error_over_points<Exec::Serial>)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_error_over_points<Exec::Parallel>)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_mc<Exec::Serial>)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_mc<Exec::Parallel>)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
}
