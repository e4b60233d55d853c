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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "equirank/attention.hpp"
#include "equirank/ranking.hpp"

namespace equirank {

// Cumulative attention and relevance per subject across the ranking
// stream. Subjects never expire: an entry keeps contributing to the
// unfairness sum after its subject stops appearing in rankings.
//
// Updates are single-writer sequential; reads may interleave freely
// between updates.
class Ledger {
 public:
  struct Entry {
    double attention = 0.0;
    double relevance = 0.0;
  };

  // Inserts unknown ids with zeroed accumulators; known ids are untouched.
  void ensure_subjects(const std::vector<SubjectId>& ids) {
    for (const auto& id : ids) entries_.try_emplace(id);
  }

  // Credits one displayed ranking: the subject at position j gains the
  // position's attention weight plus its own current relevance.
  void apply_ranking(const std::vector<SubjectId>& display_order,
                     const PositionWeights& weights,
                     const std::map<SubjectId, double>& relevances) {
    if (display_order.size() != weights.size())
      throw std::invalid_argument("apply_ranking: one weight per display position required");
    for (std::size_t j = 0; j < display_order.size(); ++j) {
      const SubjectId& id = display_order[j];
      auto it = entries_.find(id);
      if (it == entries_.end())
        throw std::invalid_argument("apply_ranking: unknown subject '" + id + "'");
      auto rel = relevances.find(id);
      if (rel == relevances.end())
        throw std::invalid_argument("apply_ranking: no relevance for subject '" + id + "'");
      it->second.attention += weights[j];
      it->second.relevance += rel->second;
    }
    ++iterations_;
  }

  // Fair-share attention deficit A - (R + r); more negative means more
  // underserved.
  double deficit(const SubjectId& id, double current_relevance) const {
    const Entry& e = at(id);
    return e.attention - (e.relevance + current_relevance);
  }

  const Entry& at(const SubjectId& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end())
      throw std::invalid_argument("ledger: unknown subject '" + id + "'");
    return it->second;
  }

  bool contains(const SubjectId& id) const { return entries_.count(id) != 0; }

  // Entries in SubjectId order; iteration order is part of the contract
  // (deterministic sums and snapshots).
  const std::map<SubjectId, Entry>& entries() const { return entries_; }

  std::int64_t iterations_processed() const { return iterations_; }

 private:
  std::map<SubjectId, Entry> entries_;
  std::int64_t iterations_ = 0;
};

}  // namespace equirank
