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
#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "equirank/csv.hpp"
#include "equirank/ranking.hpp"

namespace equirank {

// Synthetic relevance profiles: uniform scores, linearly decreasing
// scores, or exponentially decreasing scores with the given decay.
struct SyntheticShape {
  enum class Kind { uniform, linear, exponential };

  Kind kind = Kind::uniform;
  int n = 100;
  double decay = 0.5;  // exponential only

  static SyntheticShape uniform(int n) { return {Kind::uniform, n, 0.5}; }
  static SyntheticShape linear(int n) { return {Kind::linear, n, 0.5}; }
  static SyntheticShape exponential(int n, double decay = 0.5) {
    return {Kind::exponential, n, decay};
  }
};

// Deterministic synthetic request with subjects u1..un.
inline RankingRequest generate(const SyntheticShape& shape) {
  if (shape.n < 1) throw std::invalid_argument("generate: n must be >= 1");
  if (shape.kind == SyntheticShape::Kind::exponential &&
      !(shape.decay > 0.0 && shape.decay < 1.0))
    throw std::invalid_argument("generate: exponential decay must be in (0,1)");

  std::vector<std::pair<SubjectId, double>> raw;
  raw.reserve(shape.n);
  double exp_score = 1.0;
  for (int i = 1; i <= shape.n; ++i) {
    double score = 1.0;
    switch (shape.kind) {
      case SyntheticShape::Kind::uniform:
        score = 1.0;
        break;
      case SyntheticShape::Kind::linear:
        score = static_cast<double>(shape.n - i + 1);
        break;
      case SyntheticShape::Kind::exponential:
        score = exp_score;
        exp_score *= shape.decay;
        break;
    }
    raw.emplace_back("u" + std::to_string(i), score);
  }
  return make_request("synthetic", std::move(raw));
}

namespace detail {

inline std::size_t require_column(const std::vector<std::string>& header,
                                  const std::string& name, const std::string& path) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw std::runtime_error("'" + path + "': missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

inline bool parse_rating(const std::string& text, double& value) {
  if (text.empty()) return false;
  try {
    std::size_t pos = 0;
    value = std::stod(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return std::isfinite(value) && value >= 0.0;
}

}  // namespace detail

// Ingests a listings-style CSV: one request per rating column, using
// id_column for subject identity. Rows whose rating is missing or
// unparseable are dropped for that column only. Ratings are rescaled
// linearly by the column maximum and then normalized to sum 1.
inline std::vector<RankingRequest> load_listings(const std::string& path,
                                                 const std::string& id_column,
                                                 const std::vector<std::string>& rating_columns) {
  if (rating_columns.empty())
    throw std::runtime_error("load_listings: at least one rating column required");
  const auto rows = csv::read_file(path);
  if (rows.empty()) throw std::runtime_error("'" + path + "': empty file");
  const auto& header = rows.front();
  const std::size_t id_idx = detail::require_column(header, id_column, path);

  std::vector<RankingRequest> requests;
  for (const auto& column : rating_columns) {
    const std::size_t col_idx = detail::require_column(header, column, path);
    std::vector<std::pair<SubjectId, double>> raw;
    double max_rating = 0.0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.size() <= std::max(id_idx, col_idx)) continue;
      double rating;
      if (!detail::parse_rating(row[col_idx], rating)) continue;
      raw.emplace_back(row[id_idx], rating);
      max_rating = std::max(max_rating, rating);
    }
    if (raw.empty())
      throw std::runtime_error("'" + path + "': no usable rows for column '" + column + "'");
    if (max_rating <= 0.0)
      throw std::runtime_error("'" + path + "': all ratings zero in column '" + column + "'");
    for (auto& [id, rating] : raw) rating /= max_rating;
    requests.push_back(make_request(column, std::move(raw)));
  }
  return requests;
}

// Ingests a query log: header query_id,subject_id,score with rows grouped
// contiguously by query. One request per query in stream order; scores are
// normalized per query.
inline std::vector<RankingRequest> load_querylog(const std::string& path) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) throw std::runtime_error("'" + path + "': empty file");
  const std::vector<std::string> expected{"query_id", "subject_id", "score"};
  if (rows.front() != expected)
    throw std::runtime_error("'" + path + "': header must be query_id,subject_id,score");

  std::vector<RankingRequest> requests;
  std::unordered_set<std::string> finished;
  std::string current;
  std::vector<std::pair<SubjectId, double>> raw;
  std::unordered_set<SubjectId> in_query;

  const auto flush = [&] {
    if (raw.empty()) return;
    requests.push_back(make_request(current, std::move(raw)));
    raw.clear();
    in_query.clear();
  };

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 3)
      throw std::runtime_error("'" + path + "': row " + std::to_string(r + 1) +
                               " must have 3 fields");
    const std::string& query = row[0];
    if (query != current) {
      flush();
      if (!finished.insert(query).second)
        throw std::runtime_error("'" + path + "': query '" + query +
                                 "' is not contiguous in the stream");
      current = query;
    }
    double score;
    if (!detail::parse_rating(row[2], score))
      throw std::runtime_error("'" + path + "': bad score at row " + std::to_string(r + 1));
    if (!in_query.insert(row[1]).second)
      throw std::runtime_error("'" + path + "': duplicate subject '" + row[1] +
                               "' in query '" + query + "'");
    raw.emplace_back(row[1], score);
  }
  flush();
  return requests;
}

}  // namespace equirank
