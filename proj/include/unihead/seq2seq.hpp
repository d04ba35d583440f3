#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "unihead/attention.hpp"

namespace unihead {

struct DigitConfig {
  int digits = 8;
  bool terminating = true;  // prefer the terminating binary expansion at dyadic points

  void validate() const;
};

// T elements of [0,1]^{m+1}. m = 0 is allowed (scalar elements).
struct SequenceSample {
  int T = 1;
  int m = 0;
  std::vector<Vec> elements;

  void validate() const;
};

using SequenceFn = std::function<std::vector<Vec>(const std::vector<Vec>&)>;

// identity, mean (broadcast to every position), reverse.
SequenceFn make_sequence_function(const std::string& name);
std::vector<std::string> sequence_function_names();

// Largest total ternary length T(m+1)digits accepted by the exact packing and
// by the double-precision path.
inline constexpr int kExactDigitBudget = 4096;
inline constexpr int kDoubleDigitBudget = 30;

// Binary digits a_1..a_digits of x under the configured tie rule.
std::vector<int> binary_digits(double x, const DigitConfig& cfg);

// sum_j 2 a_j 3^{-1-stride(j-1)}; stride 1 is the plain Cantor encoding.
double psi_encode(double x, const DigitConfig& cfg, int stride = 1);

// Inverse of psi_encode (stride 1) on truncated Cantor values. Digit checks
// resolve to double precision only, about 32 ternary digits.
double psi_decode(double c, const DigitConfig& cfg);

// Ternary digits packed into an integer: value = mantissa / 3^K.
struct AggregateR {
  boost::multiprecision::cpp_int mantissa;
  int K = 0;

  double value() const;
  std::string ternary() const;  // K digits, most significant first
};

// R = 3 sum_i 3^{-(i-1)(m+1)} sum_p 3^{-p} psi_d(x_{i,p}) with stride d = T(m+1),
// so every binary digit lands on its own ternary position.
AggregateR aggregate_R(const SequenceSample& s, const DigitConfig& cfg);
// Same quantity evaluated in doubles; needs T(m+1)digits <= kDoubleDigitBudget.
double aggregate_R_value(const SequenceSample& s, const DigitConfig& cfg);

SequenceSample decode_sequence(const AggregateR& R, int T, int m, const DigitConfig& cfg);
// Strict: R must lie within a quarter ternary step of a packed value.
SequenceSample decode_sequence(double R, int T, int m, const DigitConfig& cfg);
// Nearest packed value; any real input is accepted (used off the lattice).
SequenceSample decode_nearest(double y, int T, int m, const DigitConfig& cfg);

std::vector<Vec> reference_seq2seq(const SequenceFn& f, const SequenceSample& s,
                                   const DigitConfig& cfg);

enum class Seq2SeqMode { Hybrid, Full };

// Offsets of the named blocks inside a token.
struct Seq2SeqLayout {
  int T = 0, e = 0;
  int X = 0, QX = 0, KX = 0, PSI = 0, SC = 0, ASLOT = 0, RS = 0, QR = 0, KR = 0, OUT = 0,
      POS = 0, PKPOS = 0, CONST = 0, PCONST = 0, D = 0;
};

Seq2SeqLayout make_layout(int T, int m);

struct Seq2SeqModel {
  TransformerStack stack;
  Seq2SeqLayout layout;
  Seq2SeqMode mode = Seq2SeqMode::Hybrid;
  DigitConfig cfg;

  std::vector<Vec> embed(const SequenceSample& s) const;
  std::vector<Vec> readout(const std::vector<Vec>& tokens) const;
  std::vector<Vec> run(const SequenceSample& s) const;
};

struct Seq2SeqOptions {
  int N = 4096;
  double lambda = 2e5;
  int interp_knots = 2048;
};

// Layer 1: psi head; layer 2: summation head producing R at every position;
// layers 3..T+2: the G_i heads. Hybrid mode injects exact psi and G_i as oracle
// stages; full mode synthesizes both from control points.
Seq2SeqModel build_seq2seq_transformer(const SequenceFn& f, int T, int m, const DigitConfig& cfg,
                                       Seq2SeqMode mode,
                                       const Seq2SeqOptions& opt = Seq2SeqOptions{});

}  // namespace unihead
