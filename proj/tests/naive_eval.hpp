#pragma once

// Straight-line reimplementation of the prefixed transformer used as an
// independent oracle: one loop per formula, no log-domain bookkeeping beyond
// the max shift that keeps exp finite.

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "unihead/attention.hpp"

namespace naive {

using unihead::Mat;
using unihead::Vec;

inline std::vector<Vec> head(const std::vector<Vec>& u, const unihead::PrefixTokens& p,
                             const unihead::AttentionHeadParams& hp) {
  std::vector<Vec> all = p.tokens;
  all.insert(all.end(), u.begin(), u.end());
  std::vector<Vec> out;
  for (const auto& q : u) {
    const Vec hq = hp.H.transpose() * q;
    std::vector<double> s(all.size());
    for (std::size_t j = 0; j < all.size(); ++j) s[j] = hq.dot(all[j]);
    const double mx = *std::max_element(s.begin(), s.end());
    Vec acc = Vec::Zero(q.size());
    double z = 0.0;
    for (std::size_t j = 0; j < all.size(); ++j) {
      const double w = std::exp(s[j] - mx);
      acc += w * (hp.W_V * all[j]);
      z += w;
    }
    out.push_back(acc / z);
  }
  return out;
}

inline Vec mlp(const unihead::MlpSpec& m, Vec v) {
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    v = m.layers[l].A * v + m.layers[l].b;
    if (l + 1 < m.layers.size()) v = v.cwiseMax(0.0);
  }
  return v;
}

inline std::vector<Vec> eval(const unihead::TransformerStack& st, std::vector<Vec> u) {
  for (const auto& layer : st.layers) {
    u = head(u, layer.prefix, layer.head);
    for (const auto& stage : layer.post)
      for (auto& v : u) {
        if (const auto* m = std::get_if<unihead::MlpSpec>(&stage))
          v = mlp(*m, v);
        else
          v = std::get<unihead::OracleStage>(stage).fn(v);
      }
  }
  return u;
}

}  // namespace naive
