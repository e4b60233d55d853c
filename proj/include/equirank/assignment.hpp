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
#include <limits>
#include <stdexcept>
#include <vector>

namespace equirank::detail {

// Min-cost rectangular assignment: gives each of `slots` columns a
// distinct row out of `rows` (slots <= rows), minimizing the sum of
// cost[row * slots + slot]. Shortest augmenting paths with potentials;
// costs may be negative (the matrix is shifted to nonnegative first,
// which changes every complete assignment by the same constant).
//
// Returns the chosen row per slot. Deterministic for fixed input.
inline std::vector<int> rectangular_assignment(int rows, int slots,
                                               const std::vector<double>& cost) {
  if (slots > rows) throw std::invalid_argument("rectangular_assignment: slots > rows");
  std::vector<int> row_of_slot(slots, -1);
  if (slots == 0) return row_of_slot;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double shift = kInf;
  for (double c : cost) shift = std::min(shift, c);
  if (shift > 0.0) shift = 0.0;

  // 1-indexed with a virtual slot 0, rows as the matched side.
  std::vector<double> u(slots + 1, 0.0), v(rows + 1, 0.0);
  std::vector<int> slot_of_row(rows + 1, 0);  // 0 = free
  std::vector<int> way(rows + 1, 0);

  std::vector<double> minv(rows + 1);
  std::vector<char> used(rows + 1);
  for (int s = 1; s <= slots; ++s) {
    slot_of_row[0] = s;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int s0 = slot_of_row[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= rows; ++j) {
        if (used[j]) continue;
        const double cur = (cost[(j - 1) * slots + (s0 - 1)] - shift) - u[s0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= rows; ++j) {
        if (used[j]) {
          u[slot_of_row[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (slot_of_row[j0] != 0);
    do {
      const int j1 = way[j0];
      slot_of_row[j0] = slot_of_row[j1];
      j0 = j1;
    } while (j0);
  }

  for (int j = 1; j <= rows; ++j)
    if (slot_of_row[j] != 0) row_of_slot[slot_of_row[j] - 1] = j - 1;
  return row_of_slot;
}

}  // namespace equirank::detail
