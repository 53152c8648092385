// Copyright 2026 The SBLS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <limits>
#include <vector>

#include "sbls/error.hpp"

namespace sbls {

using WeightMatrix = std::vector<std::vector<double>>;

namespace detail {

// Kuhn-Munkres / Jonker-Volgenant shortest augmenting path, O(n^3),
// minimizing total cost over a square matrix. Returns row -> column.
inline std::vector<int> min_cost_assignment(const WeightMatrix& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based potentials; p[j] = row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] >= 1) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

inline std::vector<int> max_weight_assignment_raw(const WeightMatrix& w) {
  WeightMatrix cost(w.size(), std::vector<double>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) cost[i][j] = -w[i][j];
  return min_cost_assignment(cost);
}

// Total weight summed in row order. Tie detection below compares these
// sums bitwise, so everyone evaluating a candidate permutation must add
// terms in exactly this order.
inline double row_order_sum(const WeightMatrix& w, const std::vector<int>& perm) {
  double s = 0.0;
  for (std::size_t k = 0; k < perm.size(); ++k) s += w[k][perm[k]];
  return s;
}

}  // namespace detail

// Maximum-weight perfect matching on a square matrix, row -> column.
// Among matchings whose row-order weight sums are equal, returns the
// lexicographically smallest permutation, so results are reproduction-stable
// on degenerate inputs (constant scores, duplicated columns).
//
// The refinement fixes one row at a time: for each candidate column, the
// best completion of the remaining rows is solved and the full candidate is
// accepted iff its direct sum reaches the optimum. The incumbent optimal
// matching is carried along as a witness, so the loop always terminates
// with an optimal permutation even if a sub-solve returns a completion
// whose floating-point sum differs in the last ulp.
inline std::vector<int> max_weight_assignment(const WeightMatrix& w) {
  const int n = static_cast<int>(w.size());
  if (n == 0) throw Error(errc::empty_matrix, "empty weight matrix");
  for (const auto& row : w)
    if (static_cast<int>(row.size()) != n)
      throw Error(errc::width_mismatch, "weight matrix must be square");
  if (n == 1) return {0};

  std::vector<int> witness = detail::max_weight_assignment_raw(w);
  const double best = detail::row_order_sum(w, witness);

  std::vector<int> prefix;
  std::vector<bool> used(n, false);
  for (int k = 0; k < n; ++k) {
    bool placed = false;
    for (int j = 0; j < n && !placed; ++j) {
      if (used[j]) continue;
      if (j == witness[k]) {
        // The witness already proves column j completes to the optimum.
        prefix.push_back(j);
        used[j] = true;
        placed = true;
        break;
      }
      // Solve the residual problem with rows 0..k pinned.
      std::vector<int> free_cols;
      for (int c = 0; c < n; ++c)
        if (!used[c] && c != j) free_cols.push_back(c);
      const int m = n - k - 1;
      WeightMatrix sub(m, std::vector<double>(m));
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) sub[r][c] = w[k + 1 + r][free_cols[c]];

      std::vector<int> candidate = prefix;
      candidate.push_back(j);
      if (m > 0) {
        std::vector<int> tail = detail::max_weight_assignment_raw(sub);
        for (int r = 0; r < m; ++r) candidate.push_back(free_cols[tail[r]]);
      }
      if (detail::row_order_sum(w, candidate) == best) {
        prefix.push_back(j);
        used[j] = true;
        witness = candidate;
        placed = true;
      }
    }
    if (!placed) {
      // Cannot happen: witness[k] is always a valid choice.
      prefix.push_back(witness[k]);
      used[witness[k]] = true;
    }
  }
  return prefix;
}

}  // namespace sbls
