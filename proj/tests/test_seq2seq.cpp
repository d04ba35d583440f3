#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "naive_eval.hpp"
#include "unihead/errors.hpp"
#include "unihead/seq2seq.hpp"

using namespace unihead;
using doctest::Approx;

namespace {

SequenceSample random_sample(int T, int m, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SequenceSample s;
  s.T = T;
  s.m = m;
  for (int i = 0; i < T; ++i) {
    Vec x(m + 1);
    for (int p = 0; p <= m; ++p) x[p] = u(g);
    s.elements.push_back(x);
  }
  return s;
}

SequenceSample scalar_pair(double a, double b) {
  return SequenceSample{2, 0, {Vec::Constant(1, a), Vec::Constant(1, b)}};
}

double trunc_to(double x, int digits) {
  if (x == 1.0) return 1.0 - std::ldexp(1.0, -digits);
  return std::floor(std::ldexp(x, digits)) * std::ldexp(1.0, -digits);
}

}  // namespace

TEST_CASE("psi_encode") {
  DigitConfig cfg{8, true};
  CHECK(psi_encode(0.0, cfg) == 0.0);
  CHECK(psi_encode(1.0, cfg) == Approx(1.0 - std::pow(3.0, -8)).epsilon(1e-15));
  CHECK(psi_encode(0.5, cfg) == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(psi_encode(1.5, cfg), DomainError);
  CHECK_THROWS_AS(psi_encode(-0.1, cfg), DomainError);
  double prev = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double v = psi_encode(i / 10000.0, cfg);
    CHECK(v >= prev);
    prev = v;
  }
  // the non-terminating rule sends 1/2 to 0.0111...
  DigitConfig nt{4, false};
  CHECK(psi_encode(0.5, nt) == Approx(2.0 / 9 + 2.0 / 27 + 2.0 / 81).epsilon(1e-15));
}

TEST_CASE("psi_decode") {
  DigitConfig cfg{8, true};
  for (double x : {0.0, 0.25, 0.5, 0.75}) CHECK(psi_decode(psi_encode(x, cfg), cfg) == x);
  CHECK(psi_decode(2.0 / 3.0, cfg) == 0.5);
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(g);
    CHECK(psi_decode(psi_encode(x, cfg), cfg) == trunc_to(x, 8));
  }
  CHECK_THROWS_AS(psi_decode(1.0 / 3.0 + 1.0 / 81, cfg), EncodingError);  // 0.1010...
  CHECK_THROWS_AS(psi_decode(0.5, cfg), EncodingError);
}

TEST_CASE("aggregate_R hand values") {
  DigitConfig cfg{8, true};
  CHECK(aggregate_R(SequenceSample{1, 0, {Vec::Constant(1, 0.0)}}, cfg).value() == 0.0);
  const auto R = aggregate_R(SequenceSample{1, 0, {Vec::Constant(1, 0.5)}}, cfg);
  CHECK(R.value() == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(R.ternary() == "20000000");
  auto back = decode_sequence(2.0 / 3.0, 1, 0, cfg);
  CHECK(back.elements[0][0] == 0.5);
}

TEST_CASE("aggregate_R interleaves digits across coordinates") {
  // T=1, m=1, x=(1/2, 1/4), two digits: positions are (x1 d1, x2 d1, x1 d2, x2 d2)
  DigitConfig cfg{2, true};
  const auto R = aggregate_R(SequenceSample{1, 1, {Vec::Map(std::vector<double>{0.5, 0.25}.data(), 2)}}, cfg);
  CHECK(R.ternary() == "2002");
}

TEST_CASE("round trip recovers truncated coordinates") {
  std::mt19937_64 g(7);
  for (int T = 1; T <= 4; ++T)
    for (int m = 0; m <= 2; ++m)
      for (int digits = 1; digits <= 6; ++digits) {
        DigitConfig cfg{digits, true};
        for (int n = 0; n < 25; ++n) {
          auto s = random_sample(T, m, g);
          const auto R = aggregate_R(s, cfg);
          const auto back = decode_sequence(R, T, m, cfg);
          for (int i = 0; i < T; ++i)
            for (int p = 0; p <= m; ++p) CHECK(back.elements[i][p] == trunc_to(s.elements[i][p], digits));
          if (T * (m + 1) * digits <= kDoubleDigitBudget) {
            const auto viaD = decode_sequence(aggregate_R_value(s, cfg), T, m, cfg);
            for (int i = 0; i < T; ++i) CHECK(viaD.elements[i] == back.elements[i]);
          }
        }
      }
}

TEST_CASE("distinct truncated inputs never collide") {
  // exhaustive: T=2, m=1, digits=2 -> 4^4 = 256 inputs
  DigitConfig cfg{2, true};
  std::vector<std::string> keys;
  for (int c = 0; c < 256; ++c) {
    SequenceSample s{2, 1, {}};
    Vec a(2), b(2);
    a << (c & 3) / 4.0, ((c >> 2) & 3) / 4.0;
    b << ((c >> 4) & 3) / 4.0, ((c >> 6) & 3) / 4.0;
    s.elements = {a, b};
    keys.push_back(aggregate_R(s, cfg).ternary());
  }
  std::sort(keys.begin(), keys.end());
  CHECK(std::unique(keys.begin(), keys.end()) == keys.end());
}

TEST_CASE("decode errors") {
  DigitConfig cfg{4, true};
  auto R = aggregate_R(scalar_pair(0.3, 0.6), cfg);
  CHECK_THROWS_AS(decode_sequence(R, 3, 0, cfg), EncodingError);
  auto bad = R;
  bad.mantissa += 1;  // last digit becomes 1 or 3
  CHECK_THROWS_AS(decode_sequence(bad, 2, 0, cfg), EncodingError);
  CHECK_THROWS_AS(decode_sequence(0.5, 2, 0, cfg), EncodingError);
  DigitConfig big{20, true};
  SequenceSample s{2, 0, {Vec::Constant(1, 0.1), Vec::Constant(1, 0.2)}};
  CHECK_THROWS_AS(aggregate_R_value(s, big), PrecisionBudgetExceeded);
  CHECK_NOTHROW(aggregate_R(s, big));
  SequenceSample huge{200, 0, std::vector<Vec>(200, Vec::Constant(1, 0.3))};
  CHECK_THROWS_AS(aggregate_R(huge, DigitConfig{40, true}), PrecisionBudgetExceeded);
}

TEST_CASE("reference_seq2seq") {
  DigitConfig cfg{4, true};
  std::mt19937_64 g(1);
  auto id = make_sequence_function("identity");
  auto mean = make_sequence_function("mean");
  for (int n = 0; n < 50; ++n) {
    auto s = random_sample(2, 1, g);
    auto out = reference_seq2seq(id, s, cfg);
    for (int i = 0; i < 2; ++i)
      for (int p = 0; p < 2; ++p) CHECK(out[i][p] == trunc_to(s.elements[i][p], 4));
    auto mo = reference_seq2seq(mean, s, cfg);
    for (int p = 0; p < 2; ++p) {
      const double direct = 0.5 * (trunc_to(s.elements[0][p], 4) + trunc_to(s.elements[1][p], 4));
      CHECK(mo[0][p] == direct);
      CHECK(mo[1][p] == direct);
    }
    // mean is 1-Lipschitz per coordinate under the sup over positions
    auto exact = mean(s.elements);
    for (int i = 0; i < 2; ++i) CHECK((mo[i] - exact[i]).norm() <= std::sqrt(2.0) * std::ldexp(1.0, -4));
  }
  CHECK_THROWS_AS(make_sequence_function("sum"), DomainError);
}

TEST_CASE("layer count is T+2") {
  DigitConfig cfg{2, true};
  auto f = make_sequence_function("reverse");
  for (int T = 1; T <= 3; ++T) {
    CHECK(build_seq2seq_transformer(f, T, 1, cfg, Seq2SeqMode::Hybrid).stack.attention_layer_count() ==
          static_cast<std::size_t>(T + 2));
  }
  Seq2SeqOptions small;
  small.N = 64;
  small.lambda = 50.0;
  for (int T = 1; T <= 3; ++T)
    CHECK(build_seq2seq_transformer(f, T, 0, cfg, Seq2SeqMode::Full, small).stack.attention_layer_count() ==
          static_cast<std::size_t>(T + 2));
}

TEST_CASE("hybrid pipeline equals the reference") {
  DigitConfig cfg{4, true};
  std::mt19937_64 g(2);
  for (const auto& name : sequence_function_names()) {
    auto f = make_sequence_function(name);
    auto model = build_seq2seq_transformer(f, 2, 1, cfg, Seq2SeqMode::Hybrid);
    for (int n = 0; n < 40; ++n) {
      auto s = random_sample(2, 1, g);
      auto ref = reference_seq2seq(f, s, cfg);
      auto out = model.run(s);
      for (int i = 0; i < 2; ++i) CHECK((out[i] - ref[i]).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("summation head produces R at every position") {
  std::mt19937_64 g(3);
  for (int T = 1; T <= 3; ++T) {
    DigitConfig cfg{3, true};
    auto model = build_seq2seq_transformer(make_sequence_function("identity"), T, 1, cfg, Seq2SeqMode::Hybrid);
    for (int n = 0; n < 20; ++n) {
      auto s = random_sample(T, 1, g);
      std::vector<std::vector<Vec>> trace;
      transformer_eval_trace(model.stack, model.embed(s), &trace);
      const double R = aggregate_R_value(s, cfg);
      for (int i = 0; i < T; ++i) {
        CHECK(std::fabs(trace[1][i][model.layout.RS] - R) <= 1e-12);
        CHECK(trace[1][i][model.layout.POS + i] == Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("library stack evaluation agrees with a naive evaluator") {
  DigitConfig cfg{4, true};
  auto model = build_seq2seq_transformer(make_sequence_function("mean"), 2, 1, cfg, Seq2SeqMode::Hybrid);
  std::mt19937_64 g(5);
  for (int n = 0; n < 10; ++n) {
    auto s = random_sample(2, 1, g);
    auto a = transformer_eval(model.stack, model.embed(s));
    auto b = naive::eval(model.stack, model.embed(s));
    for (int i = 0; i < 2; ++i) CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("full mode on a small instance") {
  DigitConfig cfg{2, true};
  auto f = make_sequence_function("mean");
  auto model = build_seq2seq_transformer(f, 2, 0, cfg, Seq2SeqMode::Full);
  double worst = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      auto s = scalar_pair(a / 8.0 + 1.0 / 16, b / 8.0 + 1.0 / 16);
      auto ref = reference_seq2seq(f, s, cfg);
      auto out = model.run(s);
      for (int i = 0; i < 2; ++i) worst = std::max(worst, (out[i] - ref[i]).norm());
    }
  CHECK(worst <= 1e-6);
}

TEST_CASE("builder preconditions") {
  auto f = make_sequence_function("identity");
  CHECK_THROWS_AS(build_seq2seq_transformer(f, 4, 0, DigitConfig{2, true}, Seq2SeqMode::Full), InstanceTooLarge);
  CHECK_THROWS_AS(build_seq2seq_transformer(f, 2, 2, DigitConfig{2, true}, Seq2SeqMode::Full), InstanceTooLarge);
  CHECK_THROWS_AS(build_seq2seq_transformer(f, 2, 0, DigitConfig{4, true}, Seq2SeqMode::Full), InstanceTooLarge);
  CHECK_THROWS_AS(build_seq2seq_transformer(f, 4, 2, DigitConfig{4, true}, Seq2SeqMode::Hybrid),
                  PrecisionBudgetExceeded);
  CHECK_THROWS_AS(DigitConfig({0, true}).validate(), DomainError);
  CHECK_THROWS_AS(DigitConfig({41, true}).validate(), DomainError);
}
