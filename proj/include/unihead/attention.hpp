#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "unihead/sphere.hpp"

namespace unihead {

struct ControlItem {
  SpherePoint alpha;
  Vec beta;
};

struct ControlPoints {
  int m = 2;
  double lambda = 1.0;
  std::vector<ControlItem> items;

  std::size_t size() const { return items.size(); }
  void validate() const;
};

struct AttentionHeadParams {
  int d = 0;
  Mat H;
  Mat W_V;

  void validate() const;
};

struct PrefixTokens {
  int d = 0;
  std::vector<Vec> tokens;
  double M = -1.0;
  bool augmented = false;
  // provenance of universal-head prefixes; m = -1 when not applicable
  int m = -1;
  double lambda = 0.0;

  void validate() const;
};

struct AffineMap {
  Mat A;
  Vec b;
};

// Affine maps with ReLU between consecutive maps (none after the last).
struct MlpSpec {
  std::vector<AffineMap> layers;
};

// Exact element-wise stage used where a construction substitutes a known map
// for an approximating MLP.
struct OracleStage {
  std::string name;
  std::function<Vec(const Vec&)> fn;
};

using ElementwiseStage = std::variant<MlpSpec, OracleStage>;

struct TransformerLayer {
  AttentionHeadParams head;
  PrefixTokens prefix;
  std::vector<ElementwiseStage> post;
};

struct TransformerStack {
  std::vector<TransformerLayer> layers;

  std::size_t attention_layer_count() const { return layers.size(); }
  void validate() const;
};

// Sum_k exp(lambda <x, alpha_k>) beta_k. Overflows to inf for huge lambda; use
// core_head_scaled there.
Vec core_head(const ControlPoints& cp, const SpherePoint& x);

struct ScaledVec {
  Vec mantissa;
  double log_scale = 0.0;  // value = mantissa * exp(log_scale)
};

ScaledVec core_head_scaled(const ControlPoints& cp, const SpherePoint& x);

Vec split_head(const ControlPoints& cp, const SpherePoint& x);

// Softmax weights of the split head.
Vec split_weights(const ControlPoints& cp, const SpherePoint& x);

// Single classical head with prefix: every position attends to all prefix
// tokens and all inputs.
std::vector<Vec> classical_head(const std::vector<Vec>& inputs, const PrefixTokens& prefix,
                                const AttentionHeadParams& params);

Vec lift(const SpherePoint& x, bool augmented);
Vec project(const Vec& y);

AttentionHeadParams build_universal_head(int m, double M, bool augmented);
PrefixTokens assemble_prefix_tokens(const ControlPoints& cp, double M, bool augmented);

// Default M = -(lambda + 30 + ln N).
double default_suppression(double lambda, std::size_t n_tokens);

Vec apply_mlp(const MlpSpec& mlp, const Vec& v);

std::vector<Vec> transformer_eval(const TransformerStack& stack, const std::vector<Vec>& inputs);

// Same, recording the output of every layer (after its element-wise stages).
std::vector<Vec> transformer_eval_trace(const TransformerStack& stack,
                                        const std::vector<Vec>& inputs,
                                        std::vector<std::vector<Vec>>* per_layer);

}  // namespace unihead
