// Copyright 2026 The Equirank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace equirank {

// Position-bias model producing the fraction of searcher attention that
// each display position receives. Weights depend on the position only,
// never on the subject occupying it.
struct AttentionModel {
  enum class Kind { singular, geometric };

  Kind kind = Kind::singular;
  double p = 0.5;   // per-position continuation probability (geometric)
  int cutoff = 5;   // positions below the cutoff receive zero attention

  static AttentionModel singular() { return AttentionModel{Kind::singular, 1.0, 1}; }

  static AttentionModel geometric(double p, int cutoff) {
    return AttentionModel{Kind::geometric, p, cutoff};
  }
};

// Per-position attention fractions: nonnegative, non-increasing, sum 1.
struct PositionWeights {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t j) const { return weights[j]; }
};

// Weight vector for `n` display positions.
//
// Geometric: raw w_j = p(1-p)^(j-1) for j <= cutoff, 0 below, rescaled to
// sum 1 (the series is truncated at n first when n < cutoff).
// Singular: all attention on the top position.
inline PositionWeights position_weights(const AttentionModel& model, std::size_t n) {
  if (n < 1) throw std::invalid_argument("position_weights: n must be >= 1");

  std::vector<double> w(n, 0.0);
  switch (model.kind) {
    case AttentionModel::Kind::singular:
      w[0] = 1.0;
      break;
    case AttentionModel::Kind::geometric: {
      if (!(model.p > 0.0 && model.p <= 1.0))
        throw std::invalid_argument("position_weights: geometric p must be in (0,1]");
      if (model.cutoff < 1)
        throw std::invalid_argument("position_weights: geometric cutoff must be >= 1");
      const std::size_t m = std::min<std::size_t>(n, static_cast<std::size_t>(model.cutoff));
      double term = model.p;  // p(1-p)^j by running product, exact at p = 1
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        w[j] = term;
        sum += term;
        term *= 1.0 - model.p;
      }
      for (std::size_t j = 0; j < m; ++j) w[j] /= sum;
      break;
    }
  }
  return PositionWeights{std::move(w)};
}

}  // namespace equirank
