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
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "equirank/attention.hpp"
#include "equirank/ledger.hpp"
#include "equirank/metrics.hpp"
#include "equirank/ranking.hpp"
#include "equirank/solver.hpp"

namespace equirank {

// Ranking policy under comparison: pass the relevance order through,
// sort by attention deficit, or solve the constrained assignment over a
// prefiltered candidate set.
struct RerankPolicy {
  enum class Kind { relevance, objective, ilp };

  Kind kind = Kind::relevance;
  QualityParams quality{1, 1.0};  // quality rank k and floor theta (ilp)
  int candidate_size = 100;       // t (ilp)
  double feasibility_tol = 1e-7;

  static RerankPolicy relevance() { return RerankPolicy{}; }

  static RerankPolicy objective() {
    RerankPolicy p;
    p.kind = Kind::objective;
    return p;
  }

  static RerankPolicy ilp(double theta, int candidate_size, int quality_rank,
                          double feasibility_tol = 1e-7) {
    if (theta < 0.0 || theta > 1.0)
      throw std::invalid_argument("ilp policy: theta must be in [0,1]");
    if (quality_rank < 1) throw std::invalid_argument("ilp policy: quality rank must be >= 1");
    if (candidate_size < quality_rank)
      throw std::invalid_argument("ilp policy: candidate size t must be >= quality rank k");
    RerankPolicy p;
    p.kind = Kind::ilp;
    p.quality = QualityParams{quality_rank, theta};
    p.candidate_size = candidate_size;
    p.feasibility_tol = feasibility_tol;
    return p;
  }
};

// Per-iteration telemetry surfaced in the metrics CSV.
struct IterationRecord {
  std::int64_t iteration = 0;
  double unfairness = 0.0;
  double ndcg_quality = 1.0;
  bool solver_feasible = true;
  double solve_ms = 0.0;
};

struct StepResult {
  std::vector<SubjectId> order;
  IterationRecord record;
};

// Relevance baseline: the request order, untouched.
inline std::vector<SubjectId> rerank_relevance(const RankingRequest& request) {
  return request.subjects();
}

namespace detail {

// Shared ordering rule: ascending deficit, ties to the higher current
// relevance, then SubjectId ascending.
struct DeficitEntry {
  double deficit;
  double relevance;
  std::size_t index;  // into request.entries
  const SubjectId* id;

  bool operator<(const DeficitEntry& other) const {
    if (deficit != other.deficit) return deficit < other.deficit;
    if (relevance != other.relevance) return relevance > other.relevance;
    return *id < *other.id;
  }
};

inline std::vector<DeficitEntry> deficits_of(const RankingRequest& request,
                                             const Ledger& ledger) {
  std::vector<DeficitEntry> out;
  out.reserve(request.size());
  for (std::size_t i = 0; i < request.entries.size(); ++i) {
    const auto& [id, r] = request.entries[i];
    out.push_back(DeficitEntry{ledger.deficit(id, r), r, i, &id});
  }
  return out;
}

}  // namespace detail

// Objective heuristic: all subjects sorted by increasing deficit
// A - (R + r), no quality constraint.
inline std::vector<SubjectId> rerank_objective(const RankingRequest& request,
                                               const Ledger& ledger) {
  auto entries = detail::deficits_of(request, ledger);
  std::sort(entries.begin(), entries.end());
  std::vector<SubjectId> order;
  order.reserve(entries.size());
  for (const auto& e : entries) order.push_back(request.entries[e.index].first);
  return order;
}

// Candidate set for the constrained solve: the top-k subjects by current
// relevance (they keep the quality bound reachable) plus the
// lowest-deficit subjects among the rest, filling to min(t, n). Returns
// indices into request.entries in ascending order, i.e. relevance order.
inline std::vector<std::size_t> prefilter_candidates(const RankingRequest& request,
                                                     const Ledger& ledger, int t, int k) {
  if (t < k) throw std::invalid_argument("prefilter_candidates: t must be >= k");
  const std::size_t n = request.size();
  std::vector<std::size_t> candidates;
  if (n <= static_cast<std::size_t>(t)) {
    candidates.resize(n);
    std::iota(candidates.begin(), candidates.end(), 0);
    return candidates;
  }

  const auto top = static_cast<std::size_t>(std::min<int>(k, static_cast<int>(n)));
  for (std::size_t i = 0; i < top; ++i) candidates.push_back(i);

  const auto rest = detail::deficits_of(request, ledger);
  std::vector<detail::DeficitEntry> pool;
  pool.reserve(n - top);
  for (const auto& e : rest)
    if (e.index >= top) pool.push_back(e);
  std::sort(pool.begin(), pool.end());
  for (std::size_t i = 0; i + top < static_cast<std::size_t>(t) && i < pool.size(); ++i)
    candidates.push_back(pool[i].index);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

struct RerankOutcome {
  std::vector<SubjectId> order;
  bool solver_feasible = true;
  double solve_ms = 0.0;
};

// Builds the per-iteration assignment instance over the candidate set and
// places its optimal permutation on the top positions; non-candidates
// follow in relevance order. The quality bound uses the IDCG@k of the full
// request. If the solver reports infeasibility (impossible while the
// top-k-by-relevance subjects are candidates) the candidates fall back to
// relevance order.
inline RerankOutcome rerank_ilp(const RankingRequest& request, const Ledger& ledger,
                                const PositionWeights& weights, const RerankPolicy& policy) {
  const std::size_t n = request.size();
  RerankOutcome out;
  if (n == 0) return out;
  if (weights.size() != n)
    throw std::invalid_argument("rerank_ilp: weights must cover all positions");

  const auto candidates =
      prefilter_candidates(request, ledger, policy.candidate_size, policy.quality.k);
  const int c = static_cast<int>(candidates.size());
  const int quality_rank = policy.quality.k;

  AssignmentProblem pb;
  pb.n = c;
  pb.side_bound = policy.quality.theta * dcg_at_k(request.relevances(), quality_rank);
  pb.feasibility_tol = policy.feasibility_tol;
  pb.cost.assign(c, std::vector<double>(c, 0.0));
  pb.side_coeff.assign(c, std::vector<double>(c, 0.0));
  for (int ci = 0; ci < c; ++ci) {
    const auto& [id, r] = request.entries[candidates[ci]];
    const Ledger::Entry& e = ledger.at(id);
    const double gain = relevance_gain(r);
    for (int j = 0; j < c; ++j) {
      pb.cost[ci][j] = std::abs((e.attention + weights[j]) - (e.relevance + r));
      if (j < quality_rank) pb.side_coeff[ci][j] = gain / position_discount(j);
    }
  }

  const auto start = std::chrono::steady_clock::now();
  const SolveResult solved = solve_exact(pb);
  out.solve_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  out.solver_feasible = solved.feasible;

  std::vector<std::size_t> slot(n);
  if (solved.feasible) {
    for (int ci = 0; ci < c; ++ci)
      slot[static_cast<std::size_t>(solved.assignment[ci])] = candidates[ci];
  } else {
    for (int ci = 0; ci < c; ++ci) slot[ci] = candidates[ci];
  }
  std::size_t next = c;
  std::vector<char> is_candidate(n, 0);
  for (std::size_t i : candidates) is_candidate[i] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_candidate[i]) slot[next++] = i;

  out.order.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.order.push_back(request.entries[slot[j]].first);
  return out;
}

// One online iteration: register subjects, produce the display order under
// the policy, credit the ledger, and record unfairness (post-update),
// NDCG-quality of the emitted order, solver feasibility and timing.
inline StepResult step(Ledger& ledger, const RankingRequest& request,
                       const RerankPolicy& policy, const AttentionModel& model) {
  ledger.ensure_subjects(request.subjects());

  StepResult result;
  result.record.solver_feasible = true;
  if (request.size() > 0) {
    const PositionWeights weights = position_weights(model, request.size());
    switch (policy.kind) {
      case RerankPolicy::Kind::relevance: {
        const auto start = std::chrono::steady_clock::now();
        result.order = rerank_relevance(request);
        result.record.solve_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
        break;
      }
      case RerankPolicy::Kind::objective: {
        const auto start = std::chrono::steady_clock::now();
        result.order = rerank_objective(request, ledger);
        result.record.solve_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
        break;
      }
      case RerankPolicy::Kind::ilp: {
        RerankOutcome outcome = rerank_ilp(request, ledger, weights, policy);
        result.order = std::move(outcome.order);
        result.record.solver_feasible = outcome.solver_feasible;
        result.record.solve_ms = outcome.solve_ms;
        break;
      }
    }

    std::map<SubjectId, double> relevances;
    for (const auto& [id, r] : request.entries) relevances.emplace(id, r);
    ledger.apply_ranking(result.order, weights, relevances);

    std::vector<double> emitted;
    emitted.reserve(request.size());
    for (const auto& id : result.order) emitted.push_back(relevances.at(id));
    result.record.ndcg_quality =
        ndcg_quality(request.relevances(), emitted, policy.quality.k);
  } else {
    ledger.apply_ranking({}, PositionWeights{}, {});
  }

  result.record.iteration = ledger.iterations_processed();
  result.record.unfairness = unfairness(ledger);
  return result;
}

}  // namespace equirank
