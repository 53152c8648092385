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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "sbls/error.hpp"

namespace sbls {

// One-vs-rest AUC as the Mann-Whitney statistic with midrank tie handling:
//   ( #(pos,neg) pairs with pos > neg  +  0.5 * tied pairs ) / (n_pos*n_neg)
//
// Computed via rank sums with average ranks. Every intermediate is a
// half-integer below 2^53, so the result is bit-identical to brute-force
// pairwise counting and invariant under any strictly increasing transform
// of the scores.
inline double ovr_auc(std::span<const double> scores,
                      std::span<const std::uint8_t> positives) {
  const std::size_t n = scores.size();
  if (n != positives.size())
    throw Error(errc::width_mismatch, "scores and mask differ in length");

  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(scores[i]) || std::isinf(scores[i]))
      throw Error(errc::non_finite_score, "non-finite score in AUC input");
    if (positives[i]) ++n_pos;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw Error(errc::all_one_class,
                "AUC needs at least one positive and one negative");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of average 1-based ranks over the positives; ties share (lo+hi)/2.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k)
      if (positives[order[k]]) pos_rank_sum += avg_rank;
    i = j + 1;
  }

  const double u = pos_rank_sum -
                   0.5 * static_cast<double>(n_pos) *
                       static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Mean per-class recall over the classes present in `labels`.
// Chance level is 1/K for a K-class problem.
inline double macro_balanced_accuracy(std::span<const int> predictions,
                                      std::span<const int> labels, int k) {
  if (labels.empty() || predictions.size() != labels.size())
    throw Error(errc::no_rows, "balanced accuracy needs labeled rows");
  std::vector<std::int64_t> total(k, 0), correct(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++total[labels[i]];
    if (predictions[i] == labels[i]) ++correct[labels[i]];
  }
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < k; ++c) {
    if (total[c] == 0) continue;
    sum += static_cast<double>(correct[c]) / static_cast<double>(total[c]);
    ++present;
  }
  if (present == 0) throw Error(errc::no_rows, "no class present");
  return sum / static_cast<double>(present);
}

}  // namespace sbls
