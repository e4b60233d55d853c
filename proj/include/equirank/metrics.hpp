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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "equirank/ledger.hpp"

namespace equirank {

// Quality floor configuration: evaluation depth k and the multiplicative
// threshold theta in [0,1].
struct QualityParams {
  int k = 1;
  double theta = 1.0;
};

// L1 distance between the cumulative attention and cumulative relevance
// distributions. Zero iff attention is exactly proportional to relevance
// on the cumulative sums.
inline double unfairness(const Ledger& ledger) {
  double total = 0.0;
  for (const auto& [id, e] : ledger.entries()) total += std::abs(e.attention - e.relevance);
  return total;
}

// Graded gain used throughout: 2^r - 1 with r already normalized to [0,1].
inline double relevance_gain(double r) { return std::exp2(r) - 1.0; }

inline double position_discount(std::size_t position_index) {
  return std::log2(static_cast<double>(position_index) + 2.0);
}

// Discounted cumulative gain of the given display order, truncated at k.
inline double dcg_at_k(const std::vector<double>& relevances_in_display_order, int k) {
  if (k < 1) throw std::invalid_argument("dcg_at_k: k must be >= 1");
  const std::size_t depth =
      std::min<std::size_t>(relevances_in_display_order.size(), static_cast<std::size_t>(k));
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i)
    dcg += relevance_gain(relevances_in_display_order[i]) / position_discount(i);
  return dcg;
}

// DCG@k of a reordering relative to the original relevance-sorted ranking,
// which is treated as the ground truth. Both arguments must hold the same
// multiset of scores. When the original's top-k gains are all zero there
// is no quality to lose and the result is defined as 1.
inline double ndcg_quality(const std::vector<double>& original_order_relevances,
                           const std::vector<double>& reordered_relevances, int k) {
  if (original_order_relevances.size() != reordered_relevances.size())
    throw std::invalid_argument("ndcg_quality: rankings differ in length");
  std::vector<double> a = original_order_relevances;
  std::vector<double> b = reordered_relevances;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b)
    throw std::invalid_argument("ndcg_quality: rankings are not permutations of each other");

  const double ideal = dcg_at_k(original_order_relevances, k);
  if (ideal == 0.0) return 1.0;
  return dcg_at_k(reordered_relevances, k) / ideal;
}

}  // namespace equirank
