#include "unihead/attention.hpp"

#include <cmath>
#include <limits>

#include "unihead/errors.hpp"

namespace unihead {

namespace {

bool finite(const Mat& a) { return a.allFinite(); }

Vec logits_of(const ControlPoints& cp, const SpherePoint& x) {
  if (x.dim() != cp.m + 1) throw DimensionMismatch("head: input dimension does not match control points");
  Vec l(cp.size());
  for (std::size_t k = 0; k < cp.size(); ++k) l[k] = cp.lambda * cp.items[k].alpha.coords().dot(x.coords());
  return l;
}

}  // namespace

void ControlPoints::validate() const {
  if (items.empty()) throw DomainError("ControlPoints: empty prefix");
  if (!(lambda > 0.0)) throw DomainError("ControlPoints: lambda must be > 0");
  for (const auto& it : items) {
    if (it.alpha.m() != m) throw DimensionMismatch("ControlPoints: alpha dimension mismatch");
    if (it.beta.size() == 0) throw DimensionMismatch("ControlPoints: empty beta");
    if (it.beta.size() != items.front().beta.size())
      throw DimensionMismatch("ControlPoints: inconsistent beta length");
  }
}

void AttentionHeadParams::validate() const {
  if (H.rows() != d || H.cols() != d || W_V.rows() != d || W_V.cols() != d)
    throw DimensionMismatch("AttentionHeadParams: H and W_V must be d x d");
  if (!finite(H) || !finite(W_V)) throw DomainError("AttentionHeadParams: non-finite entries");
}

void PrefixTokens::validate() const {
  if (tokens.empty()) throw DomainError("PrefixTokens: need at least one token");
  if (!(M < 0.0)) throw DomainError("PrefixTokens: M must be negative");
  for (const auto& t : tokens)
    if (t.size() != d) throw DimensionMismatch("PrefixTokens: token length != d");
}

void TransformerStack::validate() const {
  for (const auto& layer : layers) {
    layer.head.validate();
    if (layer.prefix.d != layer.head.d) throw DimensionMismatch("TransformerStack: prefix/head d mismatch");
  }
}

ScaledVec core_head_scaled(const ControlPoints& cp, const SpherePoint& x) {
  if (cp.items.empty()) throw DomainError("core_head: empty prefix");
  const Vec l = logits_of(cp, x);
  const double shift = l.maxCoeff();
  const Eigen::Index e = cp.items.front().beta.size();
  // positive and negative parts accumulated apart, then differenced once
  Vec pos = Vec::Zero(e), neg = Vec::Zero(e);
  for (std::size_t k = 0; k < cp.size(); ++k) {
    const double w = std::exp(l[k] - shift);
    const Vec& b = cp.items[k].beta;
    for (Eigen::Index j = 0; j < e; ++j) {
      if (b[j] > 0.0)
        pos[j] += w * b[j];
      else
        neg[j] -= w * b[j];
    }
  }
  return ScaledVec{pos - neg, shift};
}

Vec core_head(const ControlPoints& cp, const SpherePoint& x) {
  const ScaledVec s = core_head_scaled(cp, x);
  return s.mantissa * std::exp(s.log_scale);
}

Vec split_weights(const ControlPoints& cp, const SpherePoint& x) {
  if (cp.items.empty()) throw DomainError("split_head: empty prefix");
  Vec l = logits_of(cp, x);
  l = (l.array() - l.maxCoeff()).exp();
  return l / l.sum();
}

Vec split_head(const ControlPoints& cp, const SpherePoint& x) {
  if (cp.items.empty()) throw DomainError("split_head: empty prefix");
  Vec l = logits_of(cp, x);
  Eigen::Index r = 0;
  l.maxCoeff(&r);
  l = (l.array() - l[r]).exp();
  // offsets from the heaviest token: equal values cancel exactly, so a
  // constant beta comes back unchanged
  const Vec& base = cp.items[r].beta;
  Vec acc = Vec::Zero(base.size());
  for (std::size_t k = 0; k < cp.size(); ++k) acc += l[k] * (cp.items[k].beta - base);
  return base + acc / l.sum();
}

std::vector<Vec> classical_head(const std::vector<Vec>& inputs, const PrefixTokens& prefix,
                                const AttentionHeadParams& params) {
  if (prefix.tokens.empty()) throw DomainError("classical_head: empty prefix");
  const int d = params.d;
  if (params.H.rows() != d || params.W_V.rows() != d || prefix.d != d)
    throw DimensionMismatch("classical_head: dimension mismatch");
  for (const auto& v : inputs)
    if (v.size() != d) throw DimensionMismatch("classical_head: input length != d");
  for (const auto& v : prefix.tokens)
    if (v.size() != d) throw DimensionMismatch("classical_head: prefix token length != d");

  const std::size_t P = prefix.tokens.size(), T = inputs.size(), n = P + T;
  Mat keys(d, n), values(d, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& v = i < P ? prefix.tokens[i] : inputs[i - P];
    keys.col(i) = params.H * v;
    values.col(i) = params.W_V * v;
  }
  std::vector<Vec> out(T);
  for (std::size_t k = 0; k < T; ++k) {
    Vec l = keys.transpose() * inputs[k];
    l = (l.array() - l.maxCoeff()).exp();
    out[k] = values * l / l.sum();
  }
  return out;
}

Vec lift(const SpherePoint& x, bool augmented) {
  const int e = x.dim();
  Vec y = Vec::Zero(3 * e + (augmented ? 1 : 0));
  y.head(e) = x.coords();
  if (augmented) y[3 * e] = 1.0;
  return y;
}

Vec project(const Vec& y) {
  if (y.size() < 3 || (y.size() % 3 != 0 && y.size() % 3 != 1))
    throw DimensionMismatch("project: length must be 3(m+1) or 3(m+1)+1");
  return y.head(y.size() / 3);
}

AttentionHeadParams build_universal_head(int m, double M, bool augmented) {
  if (m < 1) throw DomainError("build_universal_head: m must be >= 1");
  if (!(M < 0.0)) throw DomainError("build_universal_head: M must be negative");
  const int e = m + 1;
  const int d = 3 * e + (augmented ? 1 : 0);
  AttentionHeadParams p;
  p.d = d;
  p.H = Mat::Zero(d, d);
  p.W_V = Mat::Zero(d, d);
  p.H.block(0, e, e, e) = Mat::Identity(e, e);
  if (augmented)
    p.H(3 * e, 3 * e) = M;
  else
    p.H.block(0, 0, e, e) = M * Mat::Identity(e, e);
  p.W_V.block(0, 2 * e, e, e) = Mat::Identity(e, e);
  return p;
}

PrefixTokens assemble_prefix_tokens(const ControlPoints& cp, double M, bool augmented) {
  cp.validate();
  if (!(M < 0.0)) throw DomainError("assemble_prefix_tokens: M must be negative");
  const int e = cp.m + 1;
  PrefixTokens pt;
  pt.d = 3 * e + (augmented ? 1 : 0);
  pt.M = M;
  pt.augmented = augmented;
  pt.m = cp.m;
  pt.lambda = cp.lambda;
  for (const auto& it : cp.items) {
    if (it.beta.size() != e) throw DimensionMismatch("assemble_prefix_tokens: beta must have m+1 entries");
    Vec t = Vec::Zero(pt.d);
    t.segment(e, e) = cp.lambda * it.alpha.coords();
    t.segment(2 * e, e) = it.beta;
    pt.tokens.push_back(std::move(t));
  }
  return pt;
}

double default_suppression(double lambda, std::size_t n_tokens) {
  return -(lambda + 30.0 + std::log(static_cast<double>(n_tokens)));
}

Vec apply_mlp(const MlpSpec& mlp, const Vec& v) {
  Vec h = v;
  for (std::size_t i = 0; i < mlp.layers.size(); ++i) {
    const auto& L = mlp.layers[i];
    if (L.A.cols() != h.size() || L.b.size() != L.A.rows())
      throw DimensionMismatch("apply_mlp: layer shape mismatch");
    h = L.A * h + L.b;
    if (i + 1 < mlp.layers.size()) h = h.cwiseMax(0.0);
  }
  return h;
}

std::vector<Vec> transformer_eval_trace(const TransformerStack& stack,
                                        const std::vector<Vec>& inputs,
                                        std::vector<std::vector<Vec>>* per_layer) {
  std::vector<Vec> x = inputs;
  for (const auto& layer : stack.layers) {
    x = classical_head(x, layer.prefix, layer.head);
    for (const auto& stage : layer.post) {
      for (auto& v : x) {
        if (const auto* mlp = std::get_if<MlpSpec>(&stage))
          v = apply_mlp(*mlp, v);
        else
          v = std::get<OracleStage>(stage).fn(v);
      }
    }
    if (per_layer) per_layer->push_back(x);
  }
  return x;
}

std::vector<Vec> transformer_eval(const TransformerStack& stack, const std::vector<Vec>& inputs) {
  return transformer_eval_trace(stack, inputs, nullptr);
}

}  // namespace unihead
