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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbls/alignment.hpp"
#include "sbls/attribute_leakage.hpp"
#include "sbls/error.hpp"
#include "sbls/tables.hpp"

namespace sbls {

// One attribute-intersection cell, e.g. {age=young, sex=male}. Field order
// follows the grouping declaration, so equal intersections compare equal.
struct SubgroupKey {
  std::vector<std::pair<std::string, std::string>> fields;

  std::string to_string() const {
    std::string s;
    for (const auto& [f, v] : fields) {
      if (!s.empty()) s += "|";
      s += f + "=" + v;
    }
    return s;
  }

  auto operator<=>(const SubgroupKey&) const = default;
};

// A cell of label-table rows sharing one value combination.
struct SubgroupCell {
  SubgroupKey key;
  std::vector<std::size_t> label_rows;
  bool below_min_size = false;

  std::size_t n() const { return label_rows.size(); }
};

// Within-group leakage for one cell. `leakage` is empty when the cell is
// excluded (too small, or no attribute varies inside it); the reason is then
// recorded. per_attribute_m_auc carries the within-group mAUC* per schema
// attribute, empty where the attribute is not scoreable in this cell.
struct SubgroupReport {
  SubgroupKey key;
  std::size_t n = 0;
  std::optional<double> leakage;
  std::string exclusion_reason;
  std::vector<std::optional<double>> per_attribute_m_auc;

  bool included() const { return leakage.has_value(); }
};

// Enumerates the observed value combinations of `grouping_fields` in the
// label table. Combinations with fewer than `min_size` rows are returned
// but flagged; rows with an empty cell in any grouping field fall out of
// that grouping. Cells come back sorted by key.
inline std::vector<SubgroupCell> enumerate_subgroups(
    const LabelTable& labels, std::span<const std::string> grouping_fields,
    int min_size) {
  std::vector<int> cols;
  for (const auto& f : grouping_fields) {
    int c = labels.column_index(f);
    if (c < 0)
      throw Error(errc::unknown_field,
                  "grouping field '" + f + "' is not a label column");
    cols.push_back(c);
  }

  std::map<SubgroupKey, std::vector<std::size_t>> cells;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    SubgroupKey key;
    bool complete = true;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string& v = labels.cells[r][cols[i]];
      if (v.empty()) { complete = false; break; }
      key.fields.emplace_back(grouping_fields[i], v);
    }
    if (complete) cells[std::move(key)].push_back(r);
  }

  std::vector<SubgroupCell> out;
  for (auto& [key, rows] : cells) {
    SubgroupCell cell;
    cell.key = key;
    cell.label_rows = std::move(rows);
    cell.below_min_size = cell.n() < static_cast<std::size_t>(min_size);
    out.push_back(std::move(cell));
  }
  return out;
}

namespace detail {

// Restricts one attribute's joined rows to the given segment ids. Both
// sides are sorted, so this is a linear merge.
inline JoinedAttribute restrict_rows(const JoinedAttribute& d,
                                     const std::vector<std::string>& ids) {
  JoinedAttribute sub;
  sub.attribute = d.attribute;
  sub.cardinality = d.cardinality;
  std::size_t i = 0, j = 0;
  while (i < d.size() && j < ids.size()) {
    if (d.segment_ids[i] < ids[j]) {
      ++i;
    } else if (ids[j] < d.segment_ids[i]) {
      ++j;
    } else {
      sub.segment_ids.push_back(d.segment_ids[i]);
      sub.labels.push_back(d.labels[i]);
      sub.scores.push_back(d.scores[i]);
      ++i;
      ++j;
    }
  }
  sub.stats.joined_rows = sub.size();
  return sub;
}

}  // namespace detail

// Within-group leakage: alignment and AUC are recomputed from scratch on
// the subgroup's rows only, attribute by attribute. Attributes whose labels
// do not vary inside the group (or with fewer than two usable rows) are not
// scoreable and drop out of the mean. Throws when nothing is scoreable.
inline SubgroupReport subgroup_leakage(
    const SubgroupCell& cell, const LabelTable& labels,
    std::span<const JoinedAttribute> joined, ScoreMode mode) {
  std::vector<std::string> ids;
  ids.reserve(cell.n());
  for (std::size_t r : cell.label_rows) ids.push_back(labels.segment_ids[r]);
  std::sort(ids.begin(), ids.end());

  SubgroupReport report;
  report.key = cell.key;
  report.n = cell.n();
  report.per_attribute_m_auc.assign(joined.size(), std::nullopt);

  std::vector<double> excesses;
  for (std::size_t a = 0; a < joined.size(); ++a) {
    JoinedAttribute sub = detail::restrict_rows(joined[a], ids);
    std::vector<bool> present = sub.present_classes();
    int n_present = 0;
    for (bool p : present) n_present += p ? 1 : 0;
    if (sub.size() < 2 || n_present < 2) continue;  // not scoreable here

    AlignmentResult aligned = align_attribute(sub, mode);
    report.per_attribute_m_auc[a] = aligned.m_auc_star;
    excesses.push_back(
        excess_over_chance(aligned.m_auc_star, mode, sub.cardinality));
  }

  if (excesses.empty())
    throw Error(errc::no_scoreable_attribute,
                "no attribute varies within subgroup " + cell.key.to_string());

  double sum = 0.0;
  for (double e : excesses) sum += e;
  report.leakage = sum / static_cast<double>(excesses.size());
  return report;
}

// P_subgroup = omega * (1 - max_g L_g)
//            + (1 - omega) * min_g(1 - L_g) / max_g(1 - L_g)
// over the included reports. If every group is fully leaked the consistency
// ratio is 0/0; that case collapses to 0, the privacy-conservative reading.
inline double p_subgroup(std::span<const SubgroupReport> reports,
                         double omega) {
  double max_leak = -1.0, min_prot = 2.0, max_prot = -1.0;
  std::size_t included = 0;
  for (const auto& r : reports) {
    if (!r.included()) continue;
    ++included;
    const double leak = *r.leakage;
    max_leak = std::max(max_leak, leak);
    min_prot = std::min(min_prot, 1.0 - leak);
    max_prot = std::max(max_prot, 1.0 - leak);
  }
  if (included == 0)
    throw Error(errc::no_valid_subgroup,
                "no subgroup met the inclusion criteria");
  if (max_prot == 0.0) return 0.0;
  return omega * (1.0 - max_leak) + (1.0 - omega) * (min_prot / max_prot);
}

// The groupings evaluated for a list of fields: each field alone, then the
// full intersection when there is more than one field. Marginal groups keep
// attributes scoreable inside cells even when the full intersection pins
// every grouped attribute to a constant.
inline std::vector<std::vector<std::string>> subgroup_grouping_plan(
    std::span<const std::string> fields) {
  std::vector<std::vector<std::string>> plan;
  for (const auto& f : fields) plan.push_back({f});
  if (fields.size() > 1)
    plan.emplace_back(fields.begin(), fields.end());
  return plan;
}

}  // namespace sbls
