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
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "equirank/assignment.hpp"

namespace equirank {

// One iteration's constrained-assignment instance: assign n candidates to
// n display positions, minimizing the summed cost, subject to the side
// value of the chosen bijection reaching side_bound (within
// feasibility_tol). Side coefficients are nonnegative.
struct AssignmentProblem {
  int n = 0;
  std::vector<std::vector<double>> cost;        // cost[candidate][position]
  std::vector<std::vector<double>> side_coeff;  // side_coeff[candidate][position]
  double side_bound = 0.0;
  double feasibility_tol = 1e-7;
};

struct SolveResult {
  std::vector<int> assignment;  // candidate index -> position index; empty if infeasible
  double objective = 0.0;
  bool feasible = false;
};

namespace detail {

inline void check_problem(const AssignmentProblem& pb) {
  if (pb.n < 1) throw std::invalid_argument("assignment problem: n must be >= 1");
  const auto n = static_cast<std::size_t>(pb.n);
  if (pb.cost.size() != n || pb.side_coeff.size() != n)
    throw std::invalid_argument("assignment problem: matrix row count != n");
  for (std::size_t i = 0; i < n; ++i) {
    if (pb.cost[i].size() != n || pb.side_coeff[i].size() != n)
      throw std::invalid_argument("assignment problem: matrix column count != n");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(pb.cost[i][j]) || !std::isfinite(pb.side_coeff[i][j]))
        throw std::invalid_argument("assignment problem: matrices must be finite");
      if (pb.side_coeff[i][j] < 0.0)
        throw std::invalid_argument("assignment problem: side coefficients must be >= 0");
    }
  }
}

// Branch-and-bound search for the minimum-cost feasible bijection that is
// lexicographically smallest as a permutation among the optima.
//
// Candidates are assigned in index order (depth d assigns candidate d), so
// the remaining candidates always form a suffix. Positions with bitwise
// identical cost and side columns are interchangeable and collapsed into
// groups; within a group, earlier candidates take earlier positions, which
// preserves lexicographic minimality. Nodes are bounded by the exact
// unconstrained assignment relaxation of the remaining suffix and pruned
// against both the incumbent and the best feasible relaxation completion
// seen so far. Accumulated cost/side totals are always extended in
// candidate index order so that leaf values are bitwise identical to a
// direct sum over the permutation.
class ExactSolver {
 public:
  explicit ExactSolver(const AssignmentProblem& pb) : pb_(pb), n_(pb.n) {
    group_columns();
    const int g = static_cast<int>(groups_.size());
    suffix_side_max_.assign(static_cast<std::size_t>(n_ + 1) * g, 0.0);
    for (int d = n_ - 1; d >= 0; --d)
      for (int k = 0; k < g; ++k)
        suffix_side_max_[d * g + k] =
            std::max(suffix_side_max_[(d + 1) * g + k], gside(d, k));
    path_.assign(n_, -1);
    capacity_.resize(g);
    for (int k = 0; k < g; ++k) capacity_[k] = static_cast<int>(groups_[k].size());
  }

  SolveResult solve() {
    incumbent_value_ = std::numeric_limits<double>::infinity();
    best_known_value_ = std::numeric_limits<double>::infinity();
    have_incumbent_ = false;
    dfs(0, 0.0, 0.0);

    SolveResult result;
    result.feasible = have_incumbent_;
    if (!have_incumbent_) return result;
    result.objective = incumbent_value_;
    result.assignment.assign(n_, -1);
    std::vector<int> taken(groups_.size(), 0);
    for (int i = 0; i < n_; ++i) {
      const int k = incumbent_groups_[i];
      result.assignment[i] = groups_[k][taken[k]++];
    }
    return result;
  }

 private:
  // Collapse positions with identical (cost column, side column) pairs.
  void group_columns() {
    std::map<std::vector<double>, int> index;
    for (int j = 0; j < n_; ++j) {
      std::vector<double> key;
      key.reserve(2 * n_);
      for (int i = 0; i < n_; ++i) key.push_back(pb_.cost[i][j]);
      for (int i = 0; i < n_; ++i) key.push_back(pb_.side_coeff[i][j]);
      auto [it, fresh] = index.try_emplace(std::move(key), static_cast<int>(groups_.size()));
      if (fresh) groups_.emplace_back();
      groups_[it->second].push_back(j);
    }
  }

  double gcost(int i, int k) const { return pb_.cost[i][groups_[k].front()]; }
  double gside(int i, int k) const { return pb_.side_coeff[i][groups_[k].front()]; }

  bool side_feasible(double side) const {
    return side >= pb_.side_bound - pb_.feasibility_tol;
  }

  // Completes the current path with every remaining candidate in one
  // group, in candidate order, and offers the leaf as an incumbent.
  void close_forced(int d, double running_cost, double running_side, int k) {
    double total_cost = running_cost;
    double total_side = running_side;
    for (int i = d; i < n_; ++i) {
      total_cost += gcost(i, k);
      total_side += gside(i, k);
    }
    if (!side_feasible(total_side)) return;
    best_known_value_ = std::min(best_known_value_, total_cost);
    if (have_incumbent_ && total_cost >= incumbent_value_) return;
    have_incumbent_ = true;
    incumbent_value_ = total_cost;
    incumbent_groups_.assign(path_.begin(), path_.end());
    for (int i = d; i < n_; ++i) incumbent_groups_[i] = k;
  }

  void dfs(int d, double running_cost, double running_side) {
    const int g = static_cast<int>(groups_.size());

    std::vector<int> active;
    for (int k = 0; k < g; ++k)
      if (capacity_[k] > 0) active.push_back(k);

    if (active.empty()) {  // d == n_
      if (!side_feasible(running_side)) return;
      best_known_value_ = std::min(best_known_value_, running_cost);
      if (have_incumbent_ && running_cost >= incumbent_value_) return;
      have_incumbent_ = true;
      incumbent_value_ = running_cost;
      incumbent_groups_ = path_;
      return;
    }

    if (active.size() == 1) {
      close_forced(d, running_cost, running_side, active[0]);
      return;
    }

    // Reachability of the side bound from here, counting each group's
    // best remaining coefficient once per open slot.
    double side_ub = running_side;
    for (int k : active) side_ub += capacity_[k] * suffix_side_max_[d * g + k];
    const double side_guard = 1e-9 * (1.0 + std::abs(side_ub) + std::abs(pb_.side_bound));
    if (side_ub < pb_.side_bound - pb_.feasibility_tol - side_guard) return;

    // Relaxation: drop the side constraint and solve the remaining suffix
    // exactly. Candidates not matched to a non-base slot fall into the
    // base group (the one with the most open positions).
    int base = active[0];
    for (int k : active)
      if (capacity_[k] > capacity_[base]) base = k;

    std::vector<int> slot_group;
    for (int k : active)
      if (k != base) slot_group.insert(slot_group.end(), capacity_[k], k);
    const int slots = static_cast<int>(slot_group.size());
    const int rows = n_ - d;

    std::vector<int> completion(rows, base);
    if (slots > 0) {
      std::vector<double> delta(static_cast<std::size_t>(rows) * slots);
      for (int r = 0; r < rows; ++r)
        for (int s = 0; s < slots; ++s)
          delta[r * slots + s] = gcost(d + r, slot_group[s]) - gcost(d + r, base);
      const std::vector<int> row_of_slot = rectangular_assignment(rows, slots, delta);
      for (int s = 0; s < slots; ++s) completion[row_of_slot[s]] = slot_group[s];
    }

    double lb_value = running_cost;
    double lb_side = running_side;
    for (int r = 0; r < rows; ++r) {
      lb_value += gcost(d + r, completion[r]);
      lb_side += gside(d + r, completion[r]);
    }
    if (side_feasible(lb_side)) best_known_value_ = std::min(best_known_value_, lb_value);
    if (have_incumbent_ && lb_value >= incumbent_value_) return;
    if (lb_value > best_known_value_) return;

    // Children in ascending order of the position they would occupy.
    std::sort(active.begin(), active.end(), [this](int a, int b) {
      return next_position(a) < next_position(b);
    });
    for (int k : active) {
      path_[d] = k;
      --capacity_[k];
      dfs(d + 1, running_cost + gcost(d, k), running_side + gside(d, k));
      ++capacity_[k];
      path_[d] = -1;
    }
  }

  int next_position(int k) const {
    const auto& positions = groups_[k];
    return positions[positions.size() - static_cast<std::size_t>(capacity_[k])];
  }

  const AssignmentProblem& pb_;
  int n_;
  std::vector<std::vector<int>> groups_;  // positions per group, ascending
  std::vector<int> capacity_;
  std::vector<double> suffix_side_max_;   // (n+1) x groups
  std::vector<int> path_;
  std::vector<int> incumbent_groups_;
  double incumbent_value_ = 0.0;
  double best_known_value_ = 0.0;
  bool have_incumbent_ = false;
};

}  // namespace detail

// Exhaustive oracle: enumerates permutations in lexicographic order and
// keeps the first feasible one attaining the minimal objective. Guarded
// against factorial blowup.
inline SolveResult brute_force(const AssignmentProblem& pb) {
  detail::check_problem(pb);
  if (pb.n > 9) throw std::invalid_argument("brute_force: n > 9");

  SolveResult best;
  std::vector<int> perm(pb.n);
  for (int i = 0; i < pb.n; ++i) perm[i] = i;
  do {
    double side = 0.0;
    for (int i = 0; i < pb.n; ++i) side += pb.side_coeff[i][perm[i]];
    if (side < pb.side_bound - pb.feasibility_tol) continue;
    double objective = 0.0;
    for (int i = 0; i < pb.n; ++i) objective += pb.cost[i][perm[i]];
    if (!best.feasible || objective < best.objective) {
      best.feasible = true;
      best.objective = objective;
      best.assignment = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Exact solve of the constrained assignment. Among the feasible bijections
// of globally minimal objective, returns the lexicographically smallest
// permutation. Infeasibility is reported in the result, not thrown.
inline SolveResult solve_exact(const AssignmentProblem& pb) {
  detail::check_problem(pb);
  detail::ExactSolver solver(pb);
  return solver.solve();
}

}  // namespace equirank
