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
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace equirank {

using SubjectId = std::string;

// One query's subjects with their normalized relevance scores.
// Entries are sorted non-increasing by score (ties by SubjectId ascending)
// and the scores form a distribution: they sum to 1.
struct RankingRequest {
  std::string query_id;
  std::vector<std::pair<SubjectId, double>> entries;

  std::size_t size() const { return entries.size(); }

  std::vector<SubjectId> subjects() const {
    std::vector<SubjectId> ids;
    ids.reserve(entries.size());
    for (const auto& [id, r] : entries) ids.push_back(id);
    return ids;
  }

  std::vector<double> relevances() const {
    std::vector<double> r;
    r.reserve(entries.size());
    for (const auto& [id, score] : entries) r.push_back(score);
    return r;
  }
};

// Builds a RankingRequest out of raw nonnegative scores: sorts by
// (score desc, id asc) and normalizes scores to sum 1.
inline RankingRequest make_request(std::string query_id,
                                   std::vector<std::pair<SubjectId, double>> raw) {
  double total = 0.0;
  std::unordered_set<SubjectId> seen;
  for (const auto& [id, score] : raw) {
    if (id.empty()) throw std::invalid_argument("make_request: empty subject id");
    if (!std::isfinite(score) || score < 0.0)
      throw std::invalid_argument("make_request: score for '" + id +
                                  "' must be finite and nonnegative");
    if (!seen.insert(id).second)
      throw std::invalid_argument("make_request: duplicate subject '" + id + "'");
    total += score;
  }
  if (raw.empty()) throw std::invalid_argument("make_request: no subjects");
  if (total <= 0.0)
    throw std::invalid_argument("make_request: scores sum to zero, cannot normalize");

  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (auto& [id, score] : raw) score /= total;
  return RankingRequest{std::move(query_id), std::move(raw)};
}

// Throws unless the request satisfies its invariants (used by tests and
// defensive call sites; loaders always produce valid requests).
inline void validate_request(const RankingRequest& request, double tol = 1e-9) {
  double sum = 0.0;
  std::unordered_set<SubjectId> seen;
  for (std::size_t i = 0; i < request.entries.size(); ++i) {
    const auto& [id, score] = request.entries[i];
    if (id.empty()) throw std::invalid_argument("request: empty subject id");
    if (!seen.insert(id).second)
      throw std::invalid_argument("request: duplicate subject '" + id + "'");
    if (score < 0.0 || score > 1.0)
      throw std::invalid_argument("request: score out of [0,1]");
    if (i > 0 && request.entries[i - 1].second < score)
      throw std::invalid_argument("request: entries not sorted by score");
    sum += score;
  }
  if (!request.entries.empty() && std::abs(sum - 1.0) > tol)
    throw std::invalid_argument("request: scores do not sum to 1");
}

}  // namespace equirank
