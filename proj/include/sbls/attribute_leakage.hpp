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
#include <span>
#include <string>
#include <vector>

#include "sbls/alignment.hpp"
#include "sbls/config.hpp"
#include "sbls/error.hpp"

namespace sbls {

// Per-attribute excess over chance on a common [0,1] scale where 0 is
// chance-level inference and 1 is perfect recoverability.
struct AttributeLeakage {
  std::string attribute;
  double m_auc_star = 0.0;         // aligned mAUC* (soft) or balanced accuracy (hard)
  double excess_over_chance = 0.0;
  ScoreMode mode = ScoreMode::soft_scores;
  int cardinality = 0;
};

// Normalized excess over the chance baseline. Soft scores: baseline 0.5,
// scale 0.5, i.e. max{0, mAUC* - 0.5} / 0.5. Hard predictions: baseline
// 1/K; the excess is scaled by (1 - 1/K) so a perfect classifier maps to
// 1.0 on the same scale instead of overshooting it.
inline double excess_over_chance(double value, ScoreMode mode, int k) {
  if (mode == ScoreMode::soft_scores)
    return std::max(0.0, value - 0.5) / 0.5;
  const double chance = 1.0 / static_cast<double>(k);
  return std::max(0.0, value - chance) / (1.0 - chance);
}

inline AttributeLeakage attribute_excess(const AlignmentResult& alignment,
                                         ScoreMode mode, int k) {
  AttributeLeakage l;
  l.attribute = alignment.attribute;
  l.m_auc_star = alignment.m_auc_star;
  l.mode = mode;
  l.cardinality = k;
  l.excess_over_chance = excess_over_chance(alignment.m_auc_star, mode, k);
  return l;
}

// P_attr = 1 - mean excess across attributes. 1 means the attacker is at
// chance on every attribute, 0 means perfect recoverability everywhere.
inline double p_attr(std::span<const AttributeLeakage> per_attribute) {
  if (per_attribute.empty())
    throw Error(errc::empty_attribute_set, "no attributes to aggregate");
  double sum = 0.0;
  for (const auto& a : per_attribute) sum += a.excess_over_chance;
  return 1.0 - sum / static_cast<double>(per_attribute.size());
}

}  // namespace sbls
