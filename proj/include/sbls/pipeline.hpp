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

#include <string>
#include <vector>

#include "sbls/compose.hpp"
#include "sbls/config.hpp"
#include "sbls/linkage.hpp"
#include "sbls/report_io.hpp"
#include "sbls/subgroup.hpp"
#include "sbls/tables.hpp"

namespace sbls {

struct EvaluationOptions {
  EvaluationConfig config;
  // Fields that define the subgroup intersections. Empty means all schema
  // attributes. Each field is evaluated alone and, when there are several,
  // as the full intersection.
  std::vector<std::string> grouping_fields;
  std::string system_name;
};

namespace detail {

inline std::vector<std::string> effective_grouping(
    const Dataset& data, const std::vector<std::string>& requested) {
  std::vector<std::string> fields;
  if (requested.empty()) {
    for (const auto& a : data.schema.attributes()) fields.push_back(a.name);
  } else {
    for (const auto& f : requested)
      if (std::find(fields.begin(), fields.end(), f) == fields.end())
        fields.push_back(f);
  }
  return fields;
}

}  // namespace detail

// Builds the subgroup table for a dataset: marginal cells per grouping
// field plus the full-intersection cells, each scored on its own rows.
// Cells below the size threshold or with no varying attribute are kept in
// the table but marked excluded; excluded cells never influence P_subgroup.
inline std::vector<SubgroupReport> evaluate_subgroups(
    const Dataset& data, const std::vector<std::string>& grouping_fields,
    const EvaluationConfig& config) {
  std::vector<SubgroupReport> reports;
  for (const auto& grouping : subgroup_grouping_plan(grouping_fields)) {
    for (const auto& cell : enumerate_subgroups(data.labels, grouping,
                                                config.min_subgroup_size)) {
      SubgroupReport report;
      if (cell.below_min_size) {
        report.key = cell.key;
        report.n = cell.n();
        report.per_attribute_m_auc.assign(data.joined.size(), std::nullopt);
        report.exclusion_reason =
            "n < " + std::to_string(config.min_subgroup_size);
      } else {
        try {
          report = subgroup_leakage(cell, data.labels, data.joined,
                                    config.score_mode);
        } catch (const Error& e) {
          if (e.code() != errc::no_scoreable_attribute) throw;
          report.key = cell.key;
          report.n = cell.n();
          report.per_attribute_m_auc.assign(data.joined.size(), std::nullopt);
          report.exclusion_reason = "no attribute varies within group";
        }
      }
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

// Runs the full evaluation: per-attribute alignment and AUC, leakage
// excesses, aligned hard predictions and mutual information, the subgroup
// sweep, and the final weighted composition.
inline SblsReport evaluate(const Dataset& data,
                           const EvaluationOptions& options) {
  const EvaluationConfig& config = options.config;
  config.validate();

  std::vector<AttributeDiagnostics> diagnostics;
  std::vector<AttributeLeakage> leakages;
  std::vector<LinkageResult> linkages;
  for (const auto& joined : data.joined) {
    AttributeDiagnostics d;
    d.join_stats = joined.stats;
    d.alignment = align_attribute(joined, config.score_mode);
    d.leakage =
        attribute_excess(d.alignment, config.score_mode, joined.cardinality);
    // The band is read off the common excess scale; for soft scores this is
    // exactly the aligned mAUC*.
    d.band = band_vulnerability(0.5 + 0.5 * d.leakage.excess_over_chance);

    std::vector<int> preds = hard_predictions(joined, d.alignment);
    d.confusion = ConfusionMatrix::from_predictions(
        joined.labels, preds, joined.cardinality, joined.attribute);
    d.linkage = mutual_information(d.confusion);

    leakages.push_back(d.leakage);
    linkages.push_back(d.linkage);
    diagnostics.push_back(std::move(d));
  }

  const std::vector<std::string> grouping =
      detail::effective_grouping(data, options.grouping_fields);
  std::vector<SubgroupReport> subgroups =
      evaluate_subgroups(data, grouping, config);

  SblsReport report = compose(p_attr(leakages), p_assoc(linkages),
                              p_subgroup(subgroups, config.omega), config);
  report.system_name = options.system_name;
  report.attributes = std::move(diagnostics);
  report.grouping_fields = grouping;
  report.subgroups = std::move(subgroups);

  report.schema_input = {data.schema.source_path(), data.schema.digest()};
  report.label_input = {data.labels.source_path, data.labels.digest};
  for (const auto& t : data.scores)
    report.score_inputs[t.attribute] = {t.source_path, t.digest};

  report.notes.push_back(
      "vulnerability bands are heuristic AUC-excess thresholds "
      "(0.01/0.05/0.15); values near a boundary should be read as "
      "borderline");
  return report;
}

}  // namespace sbls
