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
#include <span>
#include <string>
#include <vector>

#include "sbls/alignment.hpp"
#include "sbls/error.hpp"
#include "sbls/math.hpp"
#include "sbls/tables.hpp"

namespace sbls {

// Joint counts of (true class, predicted class); rows are true classes.
struct ConfusionMatrix {
  std::string attribute;
  std::vector<std::vector<std::int64_t>> counts;
  std::int64_t total = 0;

  static ConfusionMatrix from_predictions(std::span<const int> labels,
                                          std::span<const int> predictions,
                                          int k, std::string attribute = "") {
    if (labels.size() != predictions.size())
      throw Error(errc::width_mismatch,
                  "labels and predictions differ in length");
    ConfusionMatrix cm;
    cm.attribute = std::move(attribute);
    cm.counts.assign(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      ++cm.counts[labels[i]][predictions[i]];
      ++cm.total;
    }
    return cm;
  }

  int classes() const { return static_cast<int>(counts.size()); }
};

// Plugin mutual information estimate from a confusion matrix, in nats,
// together with its log-K normalization.
struct LinkageResult {
  std::string attribute;
  double mutual_information = 0.0;  // nats
  double normalized_mi = 0.0;       // I / ln K, clamped to [0,1]
  double entropy_true = 0.0;        // nats
  double entropy_pred = 0.0;        // nats
};

// Hard predictions via argmax over the permutation-aligned columns: class k
// reads column permutation[k]. Ties resolve to the lowest class index.
inline std::vector<int> hard_predictions(const JoinedAttribute& d,
                                         const AlignmentResult& alignment) {
  std::vector<int> preds(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    int best = 0;
    double best_score = d.scores[i][alignment.permutation[0]];
    for (int k = 1; k < d.cardinality; ++k) {
      double s = d.scores[i][alignment.permutation[k]];
      if (s > best_score) {
        best = k;
        best_score = s;
      }
    }
    preds[i] = best;
  }
  return preds;
}

// Maximum-likelihood (plugin) estimate
//   I = sum_{k,j} p(k,j) * ln[ p(k,j) / (p(k)p(j)) ],   0 ln 0 := 0,
// evaluated per cell as ln(c_kj * N / (r_k * c_j)) on exact integer
// products, then summed in value order so the result is invariant under
// simultaneous relabeling of rows and columns.
inline LinkageResult mutual_information(const ConfusionMatrix& cm) {
  if (cm.total <= 0)
    throw Error(errc::empty_matrix,
                "confusion matrix has no observations");
  const int k = cm.classes();
  const double n = static_cast<double>(cm.total);

  std::vector<std::int64_t> row_sum(k, 0), col_sum(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      row_sum[i] += cm.counts[i][j];
      col_sum[j] += cm.counts[i][j];
    }

  std::vector<double> mi_terms, h_true_terms, h_pred_terms;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const std::int64_t c = cm.counts[i][j];
      if (c == 0) continue;
      const double ratio = (static_cast<double>(c) * n) /
                           (static_cast<double>(row_sum[i]) *
                            static_cast<double>(col_sum[j]));
      mi_terms.push_back(static_cast<double>(c) / n * std::log(ratio));
    }
  }
  for (int i = 0; i < k; ++i)
    if (row_sum[i] > 0)
      h_true_terms.push_back(static_cast<double>(row_sum[i]) / n *
                             std::log(n / static_cast<double>(row_sum[i])));
  for (int j = 0; j < k; ++j)
    if (col_sum[j] > 0)
      h_pred_terms.push_back(static_cast<double>(col_sum[j]) / n *
                             std::log(n / static_cast<double>(col_sum[j])));

  LinkageResult r;
  r.attribute = cm.attribute;
  r.mutual_information = sorted_sum(std::move(mi_terms));
  r.entropy_true = sorted_sum(std::move(h_true_terms));
  r.entropy_pred = sorted_sum(std::move(h_pred_terms));
  r.normalized_mi = std::clamp(
      r.mutual_information / std::log(static_cast<double>(k)), 0.0, 1.0);
  return r;
}

// P_assoc = 1 - mean normalized MI. 1 means predictions carry no systematic
// information about true attributes, 0 means fully deterministic linkage.
inline double p_assoc(std::span<const LinkageResult> per_attribute) {
  if (per_attribute.empty())
    throw Error(errc::empty_attribute_set, "no attributes to aggregate");
  double sum = 0.0;
  for (const auto& a : per_attribute) sum += a.normalized_mi;
  return 1.0 - sum / static_cast<double>(per_attribute.size());
}

}  // namespace sbls
