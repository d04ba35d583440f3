#include "unihead/seq2seq.hpp"

#include <algorithm>
#include <cmath>

#include "unihead/errors.hpp"
#include "unihead/prefix.hpp"
#include "unihead/targets.hpp"

namespace unihead {

using boost::multiprecision::cpp_int;

void DigitConfig::validate() const {
  if (digits < 1 || digits > 40) throw DomainError("DigitConfig: digits must be in [1, 40]");
}

void SequenceSample::validate() const {
  if (T < 1) throw DomainError("SequenceSample: T must be >= 1");
  if (m < 0) throw DomainError("SequenceSample: m must be >= 0");
  if (static_cast<int>(elements.size()) != T)
    throw DimensionMismatch("SequenceSample: expected T elements");
  for (const auto& x : elements) {
    if (x.size() != m + 1) throw DimensionMismatch("SequenceSample: element length != m+1");
    for (Eigen::Index p = 0; p < x.size(); ++p)
      if (!(x[p] >= 0.0 && x[p] <= 1.0)) throw DomainError("SequenceSample: coordinates must lie in [0,1]");
  }
}

SequenceFn make_sequence_function(const std::string& name) {
  if (name == "identity") return [](const std::vector<Vec>& xs) { return xs; };
  if (name == "mean")
    return [](const std::vector<Vec>& xs) {
      Vec s = Vec::Zero(xs.front().size());
      for (const auto& x : xs) s += x;
      s /= static_cast<double>(xs.size());
      return std::vector<Vec>(xs.size(), s);
    };
  if (name == "reverse")
    return [](const std::vector<Vec>& xs) { return std::vector<Vec>(xs.rbegin(), xs.rend()); };
  throw DomainError("unknown sequence function '" + name + "'");
}

std::vector<std::string> sequence_function_names() { return {"identity", "mean", "reverse"}; }

std::vector<int> binary_digits(double x, const DigitConfig& cfg) {
  cfg.validate();
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("psi_encode: x must lie in [0,1]");
  std::vector<int> a(cfg.digits, 0);
  if (cfg.terminating) {
    if (x == 1.0) {
      std::fill(a.begin(), a.end(), 1);
      return a;
    }
    for (int j = 1; j <= cfg.digits; ++j) a[j - 1] = static_cast<int>(std::fmod(std::floor(std::ldexp(x, j)), 2.0));
  } else {
    if (x == 0.0) return a;
    for (int j = 1; j <= cfg.digits; ++j)
      a[j - 1] = static_cast<int>(std::fmod(std::ceil(std::ldexp(x, j)) - 1.0, 2.0));
  }
  return a;
}

double psi_encode(double x, const DigitConfig& cfg, int stride) {
  if (stride < 1) throw DomainError("psi_encode: stride must be >= 1");
  const auto a = binary_digits(x, cfg);
  const double step = std::pow(3.0, -stride);
  double v = 0.0;
  for (int j = cfg.digits; j >= 1; --j) v = 2.0 * a[j - 1] + v * step;
  return v / 3.0;
}

namespace {

double truncation(const std::vector<int>& a) {
  double x = 0.0;
  for (std::size_t j = a.size(); j >= 1; --j) x = (x + a[j - 1]) / 2.0;
  return x;
}

// Greedy nearest point of {sum_P 2 b_P 3^{-P} : b in {0,1}^K}. The two branches
// at each position are separated intervals, so the greedy choice is exact.
std::vector<int> nearest_cantor(double y, int K, double* residual) {
  std::vector<int> b(K, 0);
  const double tail = std::pow(3.0, -K);
  double r = y, s = 1.0;
  for (int P = 1; P <= K; ++P) {
    s /= 3.0;
    if (r >= 1.5 * s - 0.5 * tail) {
      b[P - 1] = 1;
      r -= 2.0 * s;
    }
  }
  if (residual) *residual = r;
  return b;
}

double lattice_tolerance(int K) { return 0.25 * std::pow(3.0, -K) + 4e-16; }

int total_positions(int T, int m, const DigitConfig& cfg) { return T * (m + 1) * cfg.digits; }

// Ternary digit (0 or 2) at every position 1..K, K = T(m+1)digits.
std::vector<int> packed_digits(const SequenceSample& s, const DigitConfig& cfg) {
  const int e = s.m + 1, d = s.T * e, K = total_positions(s.T, s.m, cfg);
  std::vector<int> dig(K, 0);
  for (int i = 0; i < s.T; ++i)
    for (int p = 0; p < e; ++p) {
      const auto a = binary_digits(s.elements[i][p], cfg);
      const int q = i * e + p + 1;
      for (int j = 0; j < cfg.digits; ++j) dig[q + d * j - 1] = 2 * a[j];
    }
  return dig;
}

SequenceSample unpack(const std::vector<int>& bits, int T, int m, const DigitConfig& cfg) {
  const int e = m + 1, d = T * e;
  SequenceSample s;
  s.T = T;
  s.m = m;
  for (int i = 0; i < T; ++i) {
    Vec x(e);
    for (int p = 0; p < e; ++p) {
      std::vector<int> a(cfg.digits);
      const int q = i * e + p + 1;
      for (int j = 0; j < cfg.digits; ++j) a[j] = bits[q + d * j - 1];
      x[p] = truncation(a);
    }
    s.elements.push_back(x);
  }
  return s;
}

void check_shape(int T, int m) {
  if (T < 1 || m < 0) throw DomainError("decode_sequence: need T >= 1 and m >= 0");
}

}  // namespace

double psi_decode(double c, const DigitConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(c)) throw EncodingError("psi_decode: non-finite value");
  double r = 0.0;
  const auto b = nearest_cantor(c, cfg.digits, &r);
  if (std::abs(r) > lattice_tolerance(cfg.digits))
    throw EncodingError("psi_decode: value has a ternary digit outside {0, 2}");
  return truncation(b);
}

double AggregateR::value() const {
  const std::string t = ternary();
  double v = 0.0;
  for (auto it = t.rbegin(); it != t.rend(); ++it) v = (v + (*it - '0')) / 3.0;
  return v;
}

std::string AggregateR::ternary() const {
  std::string t(K, '0');
  cpp_int r = mantissa;
  for (int P = K; P >= 1; --P) {
    t[P - 1] = static_cast<char>('0' + static_cast<int>(r % 3));
    r /= 3;
  }
  if (r != 0) throw EncodingError("AggregateR: mantissa exceeds 3^K");
  return t;
}

AggregateR aggregate_R(const SequenceSample& s, const DigitConfig& cfg) {
  s.validate();
  cfg.validate();
  const int K = total_positions(s.T, s.m, cfg);
  if (K > kExactDigitBudget) throw PrecisionBudgetExceeded("aggregate_R: T(m+1)digits exceeds the exact budget");
  AggregateR R;
  R.K = K;
  for (int dgt : packed_digits(s, cfg)) R.mantissa = R.mantissa * 3 + dgt;
  return R;
}

double aggregate_R_value(const SequenceSample& s, const DigitConfig& cfg) {
  s.validate();
  cfg.validate();
  const int K = total_positions(s.T, s.m, cfg);
  if (K > kDoubleDigitBudget) throw PrecisionBudgetExceeded("aggregate_R_value: T(m+1)digits exceeds the double budget");
  const auto dig = packed_digits(s, cfg);
  double v = 0.0;
  for (int P = K; P >= 1; --P) v = (v + dig[P - 1]) / 3.0;
  return v;
}

SequenceSample decode_sequence(const AggregateR& R, int T, int m, const DigitConfig& cfg) {
  check_shape(T, m);
  cfg.validate();
  if (R.K != total_positions(T, m, cfg))
    throw EncodingError("decode_sequence: digit count does not match the declared (T, m, digits)");
  if (R.mantissa < 0) throw EncodingError("decode_sequence: negative mantissa");
  const std::string t = R.ternary();
  std::vector<int> bits(R.K);
  for (int P = 0; P < R.K; ++P) {
    if (t[P] == '1') throw EncodingError("decode_sequence: ternary digit 1 in packed stream");
    bits[P] = t[P] == '2' ? 1 : 0;
  }
  return unpack(bits, T, m, cfg);
}

SequenceSample decode_sequence(double R, int T, int m, const DigitConfig& cfg) {
  check_shape(T, m);
  cfg.validate();
  const int K = total_positions(T, m, cfg);
  if (K > kDoubleDigitBudget) throw PrecisionBudgetExceeded("decode_sequence: T(m+1)digits exceeds the double budget");
  if (!std::isfinite(R)) throw EncodingError("decode_sequence: non-finite R");
  double r = 0.0;
  const auto bits = nearest_cantor(R, K, &r);
  if (std::abs(r) > lattice_tolerance(K)) throw EncodingError("decode_sequence: R is not a packed value");
  return unpack(bits, T, m, cfg);
}

SequenceSample decode_nearest(double y, int T, int m, const DigitConfig& cfg) {
  check_shape(T, m);
  cfg.validate();
  const int K = total_positions(T, m, cfg);
  if (K > kDoubleDigitBudget) throw PrecisionBudgetExceeded("decode_nearest: T(m+1)digits exceeds the double budget");
  if (std::isnan(y)) throw EncodingError("decode_nearest: NaN");
  return unpack(nearest_cantor(y, K, nullptr), T, m, cfg);
}

std::vector<Vec> reference_seq2seq(const SequenceFn& f, const SequenceSample& s,
                                   const DigitConfig& cfg) {
  const AggregateR R = aggregate_R(s, cfg);
  const SequenceSample x = decode_sequence(R, s.T, s.m, cfg);
  auto out = f(x.elements);
  if (static_cast<int>(out.size()) != s.T) throw DimensionMismatch("reference_seq2seq: f must return T vectors");
  return out;
}

Seq2SeqLayout make_layout(int T, int m) {
  if (T < 1 || m < 0) throw DomainError("make_layout: need T >= 1 and m >= 0");
  Seq2SeqLayout L;
  L.T = T;
  L.e = m + 1;
  const int e = L.e;
  int o = 0;
  auto take = [&o](int n) {
    const int at = o;
    o += n;
    return at;
  };
  L.X = take(e);
  L.QX = take(e + 1);
  L.KX = take(e + 1);
  L.PSI = take(e);
  L.SC = take(1);
  L.ASLOT = take(T);
  L.RS = take(1);
  L.QR = take(2);
  L.KR = take(2);
  L.OUT = take(e);
  L.POS = take(T);
  L.PKPOS = take(T);
  L.CONST = take(1);
  L.PCONST = take(1);
  L.D = o;
  return L;
}

std::vector<Vec> Seq2SeqModel::embed(const SequenceSample& s) const {
  s.validate();
  if (s.T != layout.T || s.m + 1 != layout.e) throw DimensionMismatch("Seq2SeqModel: sample shape does not match the model");
  std::vector<Vec> toks;
  for (int i = 0; i < s.T; ++i) {
    Vec v = Vec::Zero(layout.D);
    v.segment(layout.X, layout.e) = s.elements[i];
    v.segment(layout.QX, layout.e + 1) = stereographic_inverse(s.elements[i]).coords();
    v[layout.POS + i] = 1.0;
    v[layout.CONST] = 1.0;
    toks.push_back(std::move(v));
  }
  return toks;
}

std::vector<Vec> Seq2SeqModel::readout(const std::vector<Vec>& tokens) const {
  std::vector<Vec> out;
  for (const auto& v : tokens) out.push_back(v.segment(layout.OUT, layout.e));
  return out;
}

std::vector<Vec> Seq2SeqModel::run(const SequenceSample& s) const {
  return readout(transformer_eval(stack, embed(s)));
}

namespace {

constexpr double kGate = 4.0;        // ReLU gate offset; exceeds every gated signal
constexpr double kSelfLogit = 50.0;  // pass-through layers
constexpr double kPrefixOff = 60.0;  // dummy prefix token suppression

void identity_block(Mat& A, int at, int n) { A.block(at, at, n, n) += Mat::Identity(n, n); }

Vec clamp01(const Vec& y) { return y.cwiseMax(0.0).cwiseMin(1.0); }

// Inverse of the cube embedding, with the pole sent to the far corner.
Vec sigma_clamped(const SpherePoint& p) {
  const int e = p.m();
  if (p[e] >= 1.0) return Vec::Ones(e);
  return clamp01(stereographic(p));
}

double sigma_scalar(const SpherePoint& p) { return p[1] >= 1.0 ? 2.0 : stereographic(p)[0]; }

PrefixTokens dummy_prefix(const Seq2SeqLayout& L, int slot) {
  PrefixTokens pt;
  pt.d = L.D;
  pt.M = -kPrefixOff;
  Vec t = Vec::Zero(L.D);
  t[slot] = 1.0;
  pt.tokens.push_back(t);
  return pt;
}

AttentionHeadParams empty_head(int D) {
  AttentionHeadParams h;
  h.d = D;
  h.H = Mat::Zero(D, D);
  h.W_V = Mat::Zero(D, D);
  return h;
}

MlpSpec contraction_mlp(const Seq2SeqLayout& L) {
  AffineMap a{Mat::Zero(L.D, L.D), Vec::Zero(L.D)};
  for (int p = 1; p <= L.e; ++p) a.A(L.SC, L.PSI + p - 1) = std::pow(3.0, 1 - p);
  identity_block(a.A, L.POS, L.T);
  identity_block(a.A, L.CONST, 1);
  return MlpSpec{{a}};
}

// ASLOT_k = 3^{-(k-1)(m+1)} SC at position k, zero elsewhere.
MlpSpec slot_mlp(const Seq2SeqLayout& L) {
  const int T = L.T, W = 3 * T + 1;
  AffineMap a{Mat::Zero(W, L.D), Vec::Zero(W)};
  for (int k = 0; k < T; ++k) {
    a.A(k, L.SC) = 1.0;
    a.A(k, L.POS + k) = kGate;
    a.b[k] = -kGate;
    a.A(T + k, L.SC) = -1.0;
    a.A(T + k, L.POS + k) = kGate;
    a.b[T + k] = -kGate;
    a.A(2 * T + k, L.POS + k) = 1.0;
  }
  a.A(3 * T, L.CONST) = 1.0;
  AffineMap b{Mat::Zero(L.D, W), Vec::Zero(L.D)};
  for (int k = 0; k < T; ++k) {
    const double c = std::pow(3.0, -k * L.e);
    b.A(L.ASLOT + k, k) = c;
    b.A(L.ASLOT + k, T + k) = -c;
    b.A(L.POS + k, 2 * T + k) = 1.0;
  }
  b.A(L.CONST, 3 * T) = 1.0;
  return MlpSpec{{a, b}};
}

// Recovers the one-hot position and R from the summation head output, then
// lays R onto the circle with a piecewise-linear ReLU interpolant.
MlpSpec summation_mlp(const Seq2SeqLayout& L, int knots) {
  const int T = L.T;
  const double ws = T >= 2 ? 2.0 / 3.0 : 1.0;
  const double wc = T >= 2 ? 1.0 / (3.0 * (T - 1)) : 0.0;
  const double alpha = 1.0 / (ws - wc), beta = -wc / (ws - wc);

  // h1 = [g+ (T), g- (T), Z (T), P (T), 1]
  const int W1 = 4 * T + 1;
  AffineMap m1{Mat::Zero(W1, L.D), Vec::Zero(W1)};
  for (int k = 0; k < T; ++k) {
    m1.A(k, L.ASLOT + k) = 1.0;
    m1.A(T + k, L.ASLOT + k) = -1.0;
    for (int r : {k, T + k}) {
      m1.A(r, L.POS + k) = kGate * alpha;
      m1.A(r, L.CONST) = kGate * beta - kGate;
    }
    m1.A(2 * T + k, L.ASLOT + k) = 1.0;
    m1.A(3 * T + k, L.POS + k) = 1.0;
  }
  m1.A(4 * T, L.CONST) = 1.0;

  // R as a linear form on h1
  Eigen::RowVectorXd rform = Eigen::RowVectorXd::Zero(W1);
  if (T >= 2) {
    const double corr = 1.0 / wc - 1.0 / ws;
    for (int k = 0; k < T; ++k) {
      rform[2 * T + k] = 1.0 / wc;
      rform[k] = -corr;
      rform[T + k] = corr;
    }
  } else {
    rform[2] = 1.0 / ws;
  }

  const double lo = -0.25, hi = 1.75, h = (hi - lo) / (knots - 1);
  std::vector<Vec> val(knots);
  for (int j = 0; j < knots; ++j) val[j] = stereographic_inverse(Vec::Constant(1, lo + j * h)).coords();
  const int U = knots - 1;

  // h2 = [R - t_j (U), R + 1, P (T), 1]
  const int W2 = U + T + 2;
  AffineMap m2{Mat::Zero(W2, W1), Vec::Zero(W2)};
  for (int j = 0; j < U; ++j) {
    m2.A.row(j) = rform;
    m2.b[j] = -(lo + j * h);
  }
  m2.A.row(U) = rform;
  m2.b[U] = 1.0;
  for (int k = 0; k < T; ++k) m2.A(U + 1 + k, 3 * T + k) = 1.0;
  m2.A(U + 1 + T, 4 * T) = 1.0;

  AffineMap m3{Mat::Zero(L.D, W2), Vec::Zero(L.D)};
  Vec prev = Vec::Zero(2);
  for (int j = 0; j < U; ++j) {
    const Vec slope = (val[j + 1] - val[j]) / h;
    m3.A.block(L.QR, j, 2, 1) = slope - prev;
    prev = slope;
  }
  m3.A.block(L.QR, U + 1 + T, 2, 1) = val[0];
  m3.A(L.RS, U) = 1.0;
  m3.A(L.RS, U + 1 + T) = -1.0;
  for (int k = 0; k < T; ++k) {
    m3.A(L.POS + k, U + 1 + k) = alpha;
    m3.A(L.POS + k, U + 1 + T) = beta;
  }
  m3.A(L.CONST, U + 1 + T) = 1.0;
  return MlpSpec{{m1, m2, m3}};
}

}  // namespace

Seq2SeqModel build_seq2seq_transformer(const SequenceFn& f, int T, int m, const DigitConfig& cfg,
                                       Seq2SeqMode mode, const Seq2SeqOptions& opt) {
  cfg.validate();
  if (T < 1 || m < 0) throw DomainError("build_seq2seq_transformer: need T >= 1 and m >= 0");
  if (total_positions(T, m, cfg) > kDoubleDigitBudget)
    throw PrecisionBudgetExceeded("build_seq2seq_transformer: T(m+1)digits exceeds the double budget");
  if (mode == Seq2SeqMode::Full) {
    if (T > 3 || m > 1 || cfg.digits > 3)
      throw InstanceTooLarge("build_seq2seq_transformer: full mode needs T <= 3, m <= 1, digits <= 3");
    if (opt.N < 1 || !(opt.lambda > 0.0)) throw DomainError("build_seq2seq_transformer: need N >= 1, lambda > 0");
  }
  if (opt.interp_knots < 3) throw DomainError("build_seq2seq_transformer: need at least 3 knots");

  Seq2SeqModel model;
  model.layout = make_layout(T, m);
  model.mode = mode;
  model.cfg = cfg;
  const Seq2SeqLayout L = model.layout;
  const int e = L.e, D = L.D, stride = T * e;
  const double lam = opt.lambda, lnN = std::log(static_cast<double>(opt.N)), lnT = std::log(static_cast<double>(T));

  auto psi_vec = [cfg, stride, e](const Vec& x) {
    Vec out(e);
    for (int p = 0; p < e; ++p) out[p] = psi_encode(std::clamp(x[p], 0.0, 1.0), cfg, stride);
    return out;
  };
  auto G = [f, cfg, T, m](int i, double y) -> Vec {
    return f(decode_nearest(y, T, m, cfg).elements).at(i);
  };

  // layer 1: psi at every position
  {
    TransformerLayer layer;
    layer.head = empty_head(D);
    if (mode == Seq2SeqMode::Hybrid) {
      layer.head.H.block(L.POS, L.POS, T, T) = kSelfLogit * Mat::Identity(T, T);
      identity_block(layer.head.W_V, L.X, e);
      layer.prefix = dummy_prefix(L, L.CONST);
      layer.post.push_back(OracleStage{"psi", [L, psi_vec](const Vec& v) {
                                         Vec w = v;
                                         w.segment(L.PSI, L.e) = psi_vec(v.segment(L.X, L.e));
                                         return w;
                                       }});
    } else {
      TargetFunction tf;
      tf.name = "psi";
      tf.m = e;
      tf.eval = [psi_vec](const SpherePoint& p) { return psi_vec(sigma_clamped(p)); };
      const ControlPoints cp = synthesize_prefix(tf, opt.N, lam, 0);
      const double B = 2.0 * lam + 40.0 + std::log(static_cast<double>(cp.size()) * T) + lnT;
      layer.head.H.block(L.QX, L.KX, e + 1, e + 1) = Mat::Identity(e + 1, e + 1);
      layer.head.H.block(L.POS, L.PKPOS, T, T) = B * Mat::Identity(T, T);
      identity_block(layer.head.W_V, L.PSI, e);
      layer.prefix.d = D;
      layer.prefix.M = -B;
      layer.prefix.lambda = lam;
      for (int j = 0; j < T; ++j)
        for (const auto& it : cp.items) {
          Vec t = Vec::Zero(D);
          t.segment(L.KX, e + 1) = lam * it.alpha.coords();
          t.segment(L.PSI, e) = it.beta;
          t[L.PKPOS + j] = 1.0;
          t[L.POS + j] = 1.0;
          t[L.CONST] = 1.0;
          layer.prefix.tokens.push_back(std::move(t));
        }
    }
    identity_block(layer.head.W_V, L.POS, T);
    identity_block(layer.head.W_V, L.CONST, 1);
    layer.post.push_back(contraction_mlp(L));
    layer.post.push_back(slot_mlp(L));
    model.stack.layers.push_back(std::move(layer));
  }

  // layer 2: every position averages the slots; R is recovered from the known weights
  {
    TransformerLayer layer;
    layer.head = empty_head(D);
    if (T >= 2) layer.head.H.block(L.POS, L.POS, T, T) = std::log(2.0 * (T - 1)) * Mat::Identity(T, T);
    layer.head.H(L.CONST, L.PCONST) = -kPrefixOff;
    identity_block(layer.head.W_V, L.ASLOT, T);
    identity_block(layer.head.W_V, L.POS, T);
    identity_block(layer.head.W_V, L.CONST, 1);
    layer.prefix = dummy_prefix(L, L.PCONST);
    layer.post.push_back(summation_mlp(L, opt.interp_knots));
    model.stack.layers.push_back(std::move(layer));
  }

  // layers 3..T+2: G_i written at position i, every other position kept
  for (int i = 0; i < T; ++i) {
    TransformerLayer layer;
    layer.head = empty_head(D);
    for (int blk : {L.QR, L.RS, L.OUT, L.POS, L.CONST}) {
      const int n = blk == L.QR ? 2 : blk == L.RS || blk == L.CONST ? 1 : blk == L.OUT ? e : T;
      identity_block(layer.head.W_V, blk, n);
    }
    if (mode == Seq2SeqMode::Hybrid) {
      layer.head.H.block(L.POS, L.POS, T, T) = kSelfLogit * Mat::Identity(T, T);
      layer.prefix = dummy_prefix(L, L.CONST);
      layer.post.push_back(OracleStage{"G" + std::to_string(i + 1), [L, G, i](const Vec& v) {
                                         Vec w = v;
                                         if (v[L.POS + i] > 0.5) w.segment(L.OUT, L.e) = G(i, v[L.RS]);
                                         return w;
                                       }});
    } else {
      TargetFunction tf;
      tf.name = "G" + std::to_string(i + 1);
      tf.m = 1;
      tf.eval = [G, i](const SpherePoint& p) { return G(i, sigma_scalar(p)); };
      const ControlPoints cp = synthesize_prefix(tf, opt.N, lam, 0);
      const double B3 = 2.0 * lam + 40.0 + lnT;
      const double B4 = 2.0 * lam + 40.0 + lnN;
      layer.head.H.block(L.QR, L.KR, 2, 2) = Mat::Identity(2, 2);
      layer.head.H.block(L.POS, L.PKPOS, T, T) = B3 * Mat::Identity(T, T);
      for (int j = 0; j < T; ++j) layer.head.H(L.POS + j, L.POS + j) = j == i ? 0.0 : B4;
      layer.prefix.d = D;
      layer.prefix.M = -B3;
      layer.prefix.lambda = lam;
      for (const auto& it : cp.items) {
        Vec t = Vec::Zero(D);
        t.segment(L.KR, 2) = lam * it.alpha.coords();
        t.segment(L.OUT, e) = it.beta;
        t[L.PKPOS + i] = 1.0;
        t[L.POS + i] = 1.0;
        t[L.CONST] = 1.0;
        layer.prefix.tokens.push_back(std::move(t));
      }
    }
    model.stack.layers.push_back(std::move(layer));
  }
  model.stack.validate();
  return model;
}

}  // namespace unihead
