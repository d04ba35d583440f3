// Prints the recorded fixtures used by the acceptance gate. Control points and
// evaluation points come from the library; everything downstream (softmax,
// error norms, transformer evaluation) is recomputed here in long double or
// through the naive evaluator.

#include <cmath>
#include <cstdio>

#include "../naive_eval.hpp"
#include "unihead/prefix.hpp"
#include "unihead/rng.hpp"
#include "unihead/seq2seq.hpp"

using namespace unihead;

namespace {

long double split_error(const ControlPoints& cp, const SpherePoint& x) {
  long double den = 0.0L, num[3] = {0.0L, 0.0L, 0.0L};
  for (const auto& it : cp.items) {
    long double dot = 0.0L;
    for (int i = 0; i < 3; ++i) dot += static_cast<long double>(x[i]) * it.alpha[i];
    const long double w = std::exp(cp.lambda * (dot - 1.0L));
    den += w;
    for (int i = 0; i < 3; ++i) num[i] += w * it.beta[i];
  }
  long double e = 0.0L;
  for (int i = 0; i < 3; ++i) {
    const long double d = num[i] / den - x[i];
    e += d * d;
  }
  return std::sqrt(e);
}

// Same seed split as approximate_budget for a run seed.
double sup_identity(int N, double lambda, int samples, std::uint64_t seed) {
  auto f = make_target("identity", 2);
  auto cp = synthesize_prefix(f, N, lambda, derive_seed(seed, 1));
  long double worst = 0.0L;
  for (const auto& x : uniform_sphere_sample(2, samples, derive_seed(seed, 2))) worst = std::max(worst, split_error(cp, x));
  return static_cast<double>(worst);
}

}  // namespace

int main() {
  std::printf("E*  identity m=2 lambda=64 N=4096: %.17g\n", sup_identity(4096, 64.0, 2048, 1));
  for (double lam : {8.0, 32.0}) std::printf("N=4096 lambda=%g: %.17g\n", lam, sup_identity(4096, lam, 2048, 1));

  const DigitConfig cfg{2, true};
  const auto f = make_sequence_function("mean");
  const auto model = build_seq2seq_transformer(f, 2, 0, cfg, Seq2SeqMode::Full);
  double worst = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      SequenceSample s{2, 0, {Vec::Constant(1, a / 8.0 + 1.0 / 16), Vec::Constant(1, b / 8.0 + 1.0 / 16)}};
      const auto ref = reference_seq2seq(f, s, cfg);
      const auto out = model.readout(naive::eval(model.stack, model.embed(s)));
      for (int i = 0; i < 2; ++i) worst = std::max(worst, (out[i] - ref[i]).norm());
    }
  std::printf("E** full mode T=2 m=0 digits=2 mean: %.17g\n", worst);
}
