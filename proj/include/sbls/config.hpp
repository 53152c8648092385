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

#include <cmath>
#include <string>

#include "sbls/error.hpp"

namespace sbls {

// soft_scores: attacker emits a real-valued score per class (AUC path).
// hard_predictions: attacker emits a single class; rows are one-hot and the
// balanced-accuracy path is used for the attribute component.
enum class ScoreMode { soft_scores, hard_predictions };

inline const char* to_string(ScoreMode m) {
  return m == ScoreMode::soft_scores ? "soft_scores" : "hard_predictions";
}

inline ScoreMode score_mode_from_string(const std::string& s) {
  if (s == "soft_scores" || s == "soft") return ScoreMode::soft_scores;
  if (s == "hard_predictions" || s == "hard")
    return ScoreMode::hard_predictions;
  throw Error(errc::invalid_spec, "unknown score mode '" + s + "'");
}

struct EvaluationConfig {
  double alpha = 0.4;   // weight of the attribute-inference component
  double beta = 0.4;    // weight of the linkage component
  double gamma = 0.2;   // weight of the subgroup component
  double omega = 0.7;   // worst-case vs consistency balance inside P_subgroup
  int min_subgroup_size = 10;
  ScoreMode score_mode = ScoreMode::soft_scores;

  void validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma))
      throw Error(errc::weight_sum_violation,
                  "alpha, beta, gamma must lie in [0,1]");
    if (std::fabs(alpha + beta + gamma - 1.0) > 1e-9)
      throw Error(errc::weight_sum_violation,
                  "alpha + beta + gamma must equal 1 (got " +
                      std::to_string(alpha + beta + gamma) + ")");
    if (!in_unit(omega))
      throw Error(errc::weight_sum_violation, "omega must lie in [0,1]");
    if (min_subgroup_size < 1)
      throw Error(errc::invalid_spec, "min_subgroup_size must be positive");
  }
};

}  // namespace sbls
