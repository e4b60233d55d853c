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

#include "equirank/attention.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace equirank {
namespace {

void expect_valid_weights(const PositionWeights& w) {
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    EXPECT_GE(w[j], 0.0);
    if (j > 0) EXPECT_LE(w[j], w[j - 1]);
    sum += w[j];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Attention, SingularPutsEverythingOnTop) {
  const auto w = position_weights(AttentionModel::singular(), 5);
  ASSERT_EQ(w.size(), 5u);
  EXPECT_EQ(w[0], 1.0);
  for (std::size_t j = 1; j < 5; ++j) EXPECT_EQ(w[j], 0.0);
}

TEST(Attention, GeometricDegeneratesToSingular) {
  const auto w = position_weights(AttentionModel::geometric(1.0, 1), 5);
  ASSERT_EQ(w.size(), 5u);
  EXPECT_EQ(w[0], 1.0);
  for (std::size_t j = 1; j < 5; ++j) EXPECT_EQ(w[j], 0.0);
}

TEST(Attention, GeometricCutoffOneEqualsSingularForAnyP) {
  for (double p : {0.1, 0.25, 0.5, 0.99, 1.0}) {
    const auto w = position_weights(AttentionModel::geometric(p, 1), 7);
    const auto s = position_weights(AttentionModel::singular(), 7);
    ASSERT_EQ(w.size(), s.size());
    for (std::size_t j = 0; j < w.size(); ++j) EXPECT_EQ(w[j], s[j]) << "p=" << p;
  }
}

TEST(Attention, GeometricHalfCutoffFive) {
  const auto w = position_weights(AttentionModel::geometric(0.5, 5), 10);
  ASSERT_EQ(w.size(), 10u);
  // raw 0.5,0.25,...,0.03125 sums to 0.96875; rescaled = 16/31, 8/31, ...
  EXPECT_NEAR(w[0], 16.0 / 31.0, 1e-15);
  EXPECT_NEAR(w[1], 8.0 / 31.0, 1e-15);
  EXPECT_NEAR(w[2], 4.0 / 31.0, 1e-15);
  EXPECT_NEAR(w[3], 2.0 / 31.0, 1e-15);
  EXPECT_NEAR(w[4], 1.0 / 31.0, 1e-15);
  for (std::size_t j = 5; j < 10; ++j) EXPECT_EQ(w[j], 0.0);
  expect_valid_weights(w);
}

TEST(Attention, TruncatesWhenFewerPositionsThanCutoff) {
  const auto w = position_weights(AttentionModel::geometric(0.5, 5), 2);
  ASSERT_EQ(w.size(), 2u);
  // raw 0.5, 0.25 -> 2/3, 1/3
  EXPECT_NEAR(w[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 1.0 / 3.0, 1e-15);
  expect_valid_weights(w);
}

TEST(Attention, EveryModelProducesAValidDistribution) {
  for (double p : {0.05, 0.5, 1.0})
    for (int cutoff : {1, 2, 5, 10, 50})
      for (std::size_t n : {1u, 2u, 5u, 37u, 100u})
        expect_valid_weights(position_weights(AttentionModel::geometric(p, cutoff), n));
  for (std::size_t n : {1u, 3u, 100u})
    expect_valid_weights(position_weights(AttentionModel::singular(), n));
}

TEST(Attention, MaxWeightDoesNotGrowWithCutoff) {
  double previous = 2.0;
  for (int cutoff : {1, 2, 5, 10, 20}) {
    const auto w = position_weights(AttentionModel::geometric(0.5, cutoff), 100);
    EXPECT_LE(w[0], previous);
    previous = w[0];
  }
}

TEST(Attention, RejectsBadParameters) {
  EXPECT_THROW(position_weights(AttentionModel::geometric(0.0, 5), 3), std::invalid_argument);
  EXPECT_THROW(position_weights(AttentionModel::geometric(1.5, 5), 3), std::invalid_argument);
  EXPECT_THROW(position_weights(AttentionModel::geometric(0.5, 0), 3), std::invalid_argument);
  EXPECT_THROW(position_weights(AttentionModel::singular(), 0), std::invalid_argument);
}

}  // namespace
}  // namespace equirank
