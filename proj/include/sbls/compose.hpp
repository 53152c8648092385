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
#include <map>
#include <string>
#include <vector>

#include "sbls/attribute_leakage.hpp"
#include "sbls/config.hpp"
#include "sbls/error.hpp"
#include "sbls/linkage.hpp"
#include "sbls/subgroup.hpp"
#include "sbls/version.hpp"

namespace sbls {

enum class VulnerabilityBand { minimal, low, moderate, noticeable };

inline const char* to_string(VulnerabilityBand b) {
  switch (b) {
    case VulnerabilityBand::minimal: return "Minimal";
    case VulnerabilityBand::low: return "Low";
    case VulnerabilityBand::moderate: return "Moderate";
    case VulnerabilityBand::noticeable: return "Noticeable";
  }
  return "?";
}

// Bands an attribute AUC by its excess over the 0.5 chance level:
//   < 0.01 Minimal, < 0.05 Low, < 0.15 Moderate, otherwise Noticeable.
inline VulnerabilityBand band_vulnerability(double auc) {
  const double excess = std::max(0.0, auc - 0.5);
  if (excess < 0.01) return VulnerabilityBand::minimal;
  if (excess < 0.05) return VulnerabilityBand::low;
  if (excess < 0.15) return VulnerabilityBand::moderate;
  return VulnerabilityBand::noticeable;
}

inline VulnerabilityBand band_from_string(const std::string& s) {
  if (s == "Minimal") return VulnerabilityBand::minimal;
  if (s == "Low") return VulnerabilityBand::low;
  if (s == "Moderate") return VulnerabilityBand::moderate;
  if (s == "Noticeable") return VulnerabilityBand::noticeable;
  throw Error(errc::parse_failure, "unknown vulnerability band '" + s + "'");
}

// Everything known about one attribute after evaluation.
struct AttributeDiagnostics {
  AlignmentResult alignment;
  AttributeLeakage leakage;
  ConfusionMatrix confusion;
  LinkageResult linkage;
  JoinStats join_stats;
  VulnerabilityBand band = VulnerabilityBand::minimal;
};

struct InputRecord {
  std::string path;
  std::string digest;
};

// The full evaluation result. Scores are stored at full precision; display
// rounding happens only at rendering time.
struct SblsReport {
  std::string system_name;  // optional label, used by multi-system runs
  EvaluationConfig config;

  double p_attr = 0.0;
  double p_assoc = 0.0;
  double p_subgroup = 0.0;
  double sbls = 0.0;

  std::vector<AttributeDiagnostics> attributes;  // schema order
  std::vector<std::string> grouping_fields;
  std::vector<SubgroupReport> subgroups;

  InputRecord schema_input;
  InputRecord label_input;
  std::map<std::string, InputRecord> score_inputs;  // attribute -> record
  std::vector<std::string> notes;
  std::string tool_version = kToolVersion;
};

// Eq-level composition: SBLS = alpha*P_attr + beta*P_assoc + gamma*P_subgroup.
// Components must already lie in [0,1]; weights are validated here.
inline SblsReport compose(double p_attr, double p_assoc, double p_subgroup,
                          const EvaluationConfig& config) {
  config.validate();
  for (double v : {p_attr, p_assoc, p_subgroup})
    if (!(v >= 0.0 && v <= 1.0))
      throw Error(errc::invalid_spec,
                  "component scores must lie in [0,1]");
  SblsReport r;
  r.config = config;
  r.p_attr = p_attr;
  r.p_assoc = p_assoc;
  r.p_subgroup = p_subgroup;
  r.sbls = config.alpha * p_attr + config.beta * p_assoc +
           config.gamma * p_subgroup;
  return r;
}

}  // namespace sbls
