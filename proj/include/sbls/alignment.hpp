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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbls/assignment.hpp"
#include "sbls/auc.hpp"
#include "sbls/config.hpp"
#include "sbls/error.hpp"
#include "sbls/tables.hpp"

namespace sbls {

// Result of aligning score columns to true classes by optimal assignment.
//
// permutation[k] is the score column assigned to true class k; it is a
// bijection on {0..K-1}. per_class_auc[k] is the aligned one-vs-rest AUC of
// class k (in hard mode, its aligned recall); classes absent from the joined
// labels are not scoreable and carry nullopt. m_auc_star is the mean over
// scoreable classes only (in hard mode it is the aligned macro balanced
// accuracy).
struct AlignmentResult {
  std::string attribute;
  std::vector<int> permutation;
  std::vector<std::optional<double>> per_class_auc;
  double m_auc_star = 0.0;
  int present_classes = 0;
};

namespace detail {

// Raw argmax predictions (lowest index wins ties); used to build the recall
// weight matrix in hard-prediction mode.
inline std::vector<int> raw_argmax(const JoinedAttribute& d) {
  std::vector<int> preds(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    int best = 0;
    for (int j = 1; j < d.cardinality; ++j)
      if (d.scores[i][j] > d.scores[i][best]) best = j;
    preds[i] = best;
  }
  return preds;
}

inline AlignmentResult align_on_weights(const JoinedAttribute& d,
                                        const WeightMatrix& w,
                                        const std::vector<bool>& present) {
  AlignmentResult r;
  r.attribute = d.attribute;
  r.permutation = max_weight_assignment(w);
  r.per_class_auc.assign(d.cardinality, std::nullopt);

  double sum = 0.0;
  for (int k = 0; k < d.cardinality; ++k) {
    if (!present[k]) continue;
    r.per_class_auc[k] = w[k][r.permutation[k]];
    sum += *r.per_class_auc[k];
    ++r.present_classes;
  }
  r.m_auc_star = sum / static_cast<double>(r.present_classes);
  return r;
}

}  // namespace detail

// Aligns score columns to true classes: solves the maximum-weight perfect
// matching over W[k][j] = ovr_auc(column j, class-k mask). Rows of classes
// absent from the labels are filled with the 0.5 chance value to keep the
// matrix square; their per-class entry is reported as not scoreable and the
// mean is taken over present classes only.
inline AlignmentResult align_permutation(const JoinedAttribute& d) {
  const int k_classes = d.cardinality;
  const std::size_t n = d.size();
  std::vector<bool> present = d.present_classes();

  int n_present = 0;
  for (bool p : present) n_present += p ? 1 : 0;
  if (n < 2 || n_present < 2)
    throw Error(errc::all_one_class,
                "attribute '" + d.attribute +
                    "' has fewer than two classes in the joined labels");

  WeightMatrix w(k_classes, std::vector<double>(k_classes, 0.5));
  std::vector<double> column(n);
  std::vector<std::uint8_t> mask(n);
  for (int k = 0; k < k_classes; ++k) {
    if (!present[k]) continue;  // chance-filled row
    for (std::size_t i = 0; i < n; ++i)
      mask[i] = d.labels[i] == k ? 1 : 0;
    for (int j = 0; j < k_classes; ++j) {
      for (std::size_t i = 0; i < n; ++i) column[i] = d.scores[i][j];
      w[k][j] = ovr_auc(column, mask);
    }
  }
  return detail::align_on_weights(d, w, present);
}

// Hard-prediction analogue: W[k][j] is the recall of true class k when
// raw prediction column j is read as class k. m_auc_star then holds the
// permutation-aligned macro balanced accuracy.
inline AlignmentResult align_balanced_accuracy(const JoinedAttribute& d) {
  const int k_classes = d.cardinality;
  std::vector<bool> present = d.present_classes();

  int n_present = 0;
  for (bool p : present) n_present += p ? 1 : 0;
  if (d.size() < 2 || n_present < 2)
    throw Error(errc::all_one_class,
                "attribute '" + d.attribute +
                    "' has fewer than two classes in the joined labels");

  std::vector<int> raw = detail::raw_argmax(d);
  std::vector<std::vector<std::int64_t>> counts(
      k_classes, std::vector<std::int64_t>(k_classes, 0));
  std::vector<std::int64_t> totals(k_classes, 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    ++counts[d.labels[i]][raw[i]];
    ++totals[d.labels[i]];
  }

  WeightMatrix w(k_classes, std::vector<double>(k_classes, 0.0));
  for (int k = 0; k < k_classes; ++k) {
    if (!present[k]) continue;
    for (int j = 0; j < k_classes; ++j)
      w[k][j] = static_cast<double>(counts[k][j]) /
                static_cast<double>(totals[k]);
  }
  return detail::align_on_weights(d, w, present);
}

inline AlignmentResult align_attribute(const JoinedAttribute& d,
                                       ScoreMode mode) {
  return mode == ScoreMode::soft_scores ? align_permutation(d)
                                        : align_balanced_accuracy(d);
}

}  // namespace sbls
