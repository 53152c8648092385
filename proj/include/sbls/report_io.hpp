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

#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbls/compose.hpp"
#include "sbls/csv.hpp"
#include "sbls/error.hpp"
#include "sbls/version.hpp"

namespace sbls {

enum class ReportFormat { json, text };

namespace detail {

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

inline nlohmann::json input_to_json(const InputRecord& r) {
  return {{"path", r.path}, {"digest", r.digest}};
}

inline InputRecord input_from_json(const nlohmann::json& j) {
  return {j.at("path").get<std::string>(), j.at("digest").get<std::string>()};
}

inline nlohmann::json optional_to_json(const std::optional<double>& v) {
  if (v.has_value()) return *v;
  return nullptr;
}

inline std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace detail

inline nlohmann::json report_to_json(const SblsReport& r) {
  nlohmann::json j;
  j["report_version"] = kReportVersion;
  j["tool"] = {{"name", kToolName}, {"version", r.tool_version}};
  j["system"] = r.system_name;
  j["config"] = {{"alpha", r.config.alpha},
                 {"beta", r.config.beta},
                 {"gamma", r.config.gamma},
                 {"omega", r.config.omega},
                 {"min_subgroup_size", r.config.min_subgroup_size},
                 {"score_mode", to_string(r.config.score_mode)}};
  j["inputs"] = {{"schema", detail::input_to_json(r.schema_input)},
                 {"labels", detail::input_to_json(r.label_input)}};
  nlohmann::json scores = nlohmann::json::object();
  for (const auto& [attr, rec] : r.score_inputs)
    scores[attr] = detail::input_to_json(rec);
  j["inputs"]["scores"] = scores;

  j["components"] = {{"p_attr", r.p_attr},
                     {"p_assoc", r.p_assoc},
                     {"p_subgroup", r.p_subgroup}};
  j["sbls"] = r.sbls;

  j["attributes"] = nlohmann::json::array();
  for (const auto& a : r.attributes) {
    nlohmann::json aj;
    aj["name"] = a.alignment.attribute;
    aj["cardinality"] = a.leakage.cardinality;
    aj["mode"] = to_string(a.leakage.mode);
    aj["join"] = {{"joined_rows", a.join_stats.joined_rows},
                  {"score_only", a.join_stats.score_only},
                  {"label_only", a.join_stats.label_only},
                  {"missing_label", a.join_stats.missing_label}};
    aj["permutation"] = a.alignment.permutation;
    nlohmann::json aucs = nlohmann::json::array();
    for (const auto& v : a.alignment.per_class_auc)
      aucs.push_back(detail::optional_to_json(v));
    aj["per_class_auc"] = aucs;
    aj["m_auc_star"] = a.alignment.m_auc_star;
    aj["excess_over_chance"] = a.leakage.excess_over_chance;
    aj["vulnerability"] = to_string(a.band);
    aj["confusion"] = a.confusion.counts;
    aj["mutual_information"] = a.linkage.mutual_information;
    aj["normalized_mi"] = a.linkage.normalized_mi;
    aj["entropy_true"] = a.linkage.entropy_true;
    aj["entropy_pred"] = a.linkage.entropy_pred;
    j["attributes"].push_back(aj);
  }

  nlohmann::json cells = nlohmann::json::array();
  for (const auto& s : r.subgroups) {
    nlohmann::json sj;
    nlohmann::json key = nlohmann::json::array();
    for (const auto& [f, v] : s.key.fields)
      key.push_back(nlohmann::json::array({f, v}));
    sj["key"] = key;
    sj["n"] = s.n;
    sj["leakage"] = detail::optional_to_json(s.leakage);
    sj["excluded_reason"] = s.exclusion_reason;
    nlohmann::json aucs = nlohmann::json::array();
    for (const auto& v : s.per_attribute_m_auc)
      aucs.push_back(detail::optional_to_json(v));
    sj["per_attribute_m_auc"] = aucs;
    cells.push_back(sj);
  }
  j["subgroups"] = {{"grouping_fields", r.grouping_fields},
                    {"min_size", r.config.min_subgroup_size},
                    {"cells", cells}};
  j["notes"] = r.notes;
  return j;
}

inline SblsReport report_from_json(const nlohmann::json& j) {
  if (!j.contains("report_version") || !j["report_version"].is_number_integer())
    throw Error(errc::parse_failure, "missing report_version");
  const int version = j["report_version"].get<int>();
  if (version != kReportVersion)
    throw Error(errc::version_mismatch,
                "report version " + std::to_string(version) +
                    " is not supported by this tool (expected " +
                    std::to_string(kReportVersion) + ")");

  SblsReport r;
  r.system_name = j.at("system").get<std::string>();
  r.tool_version = j.at("tool").at("version").get<std::string>();
  const auto& c = j.at("config");
  r.config.alpha = c.at("alpha").get<double>();
  r.config.beta = c.at("beta").get<double>();
  r.config.gamma = c.at("gamma").get<double>();
  r.config.omega = c.at("omega").get<double>();
  r.config.min_subgroup_size = c.at("min_subgroup_size").get<int>();
  r.config.score_mode =
      score_mode_from_string(c.at("score_mode").get<std::string>());

  r.schema_input = detail::input_from_json(j.at("inputs").at("schema"));
  r.label_input = detail::input_from_json(j.at("inputs").at("labels"));
  for (const auto& [attr, rec] : j.at("inputs").at("scores").items())
    r.score_inputs[attr] = detail::input_from_json(rec);

  r.p_attr = j.at("components").at("p_attr").get<double>();
  r.p_assoc = j.at("components").at("p_assoc").get<double>();
  r.p_subgroup = j.at("components").at("p_subgroup").get<double>();
  r.sbls = j.at("sbls").get<double>();

  for (const auto& aj : j.at("attributes")) {
    AttributeDiagnostics a;
    a.alignment.attribute = aj.at("name").get<std::string>();
    a.leakage.attribute = a.alignment.attribute;
    a.linkage.attribute = a.alignment.attribute;
    a.confusion.attribute = a.alignment.attribute;
    a.leakage.cardinality = aj.at("cardinality").get<int>();
    a.leakage.mode = score_mode_from_string(aj.at("mode").get<std::string>());
    a.join_stats.joined_rows = aj.at("join").at("joined_rows").get<std::size_t>();
    a.join_stats.score_only = aj.at("join").at("score_only").get<std::size_t>();
    a.join_stats.label_only = aj.at("join").at("label_only").get<std::size_t>();
    a.join_stats.missing_label =
        aj.at("join").at("missing_label").get<std::size_t>();
    a.alignment.permutation = aj.at("permutation").get<std::vector<int>>();
    for (const auto& v : aj.at("per_class_auc")) {
      a.alignment.per_class_auc.push_back(detail::optional_from_json(v));
      if (a.alignment.per_class_auc.back().has_value())
        ++a.alignment.present_classes;
    }
    a.alignment.m_auc_star = aj.at("m_auc_star").get<double>();
    a.leakage.m_auc_star = a.alignment.m_auc_star;
    a.leakage.excess_over_chance = aj.at("excess_over_chance").get<double>();
    a.band = band_from_string(aj.at("vulnerability").get<std::string>());
    a.confusion.counts =
        aj.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
    a.confusion.total = 0;
    for (const auto& row : a.confusion.counts)
      for (std::int64_t v : row) a.confusion.total += v;
    a.linkage.mutual_information = aj.at("mutual_information").get<double>();
    a.linkage.normalized_mi = aj.at("normalized_mi").get<double>();
    a.linkage.entropy_true = aj.at("entropy_true").get<double>();
    a.linkage.entropy_pred = aj.at("entropy_pred").get<double>();
    r.attributes.push_back(std::move(a));
  }

  const auto& sg = j.at("subgroups");
  r.grouping_fields = sg.at("grouping_fields").get<std::vector<std::string>>();
  for (const auto& sj : sg.at("cells")) {
    SubgroupReport s;
    for (const auto& kv : sj.at("key"))
      s.key.fields.emplace_back(kv.at(0).get<std::string>(),
                                kv.at(1).get<std::string>());
    s.n = sj.at("n").get<std::size_t>();
    s.leakage = detail::optional_from_json(sj.at("leakage"));
    s.exclusion_reason = sj.at("excluded_reason").get<std::string>();
    for (const auto& v : sj.at("per_attribute_m_auc"))
      s.per_attribute_m_auc.push_back(detail::optional_from_json(v));
    r.subgroups.push_back(std::move(s));
  }
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

// Terminal rendering. Scores display at 3 decimals; the JSON form keeps
// full precision.
inline std::string render_text(const SblsReport& r) {
  using detail::fixed3;
  std::ostringstream out;
  out << "SBLS evaluation report (" << kToolName << " " << r.tool_version
      << ")\n";
  if (!r.system_name.empty()) out << "system: " << r.system_name << "\n";
  out << "\n";
  out << "  P_attr     " << fixed3(r.p_attr) << "\n";
  out << "  P_assoc    " << fixed3(r.p_assoc) << "\n";
  out << "  P_subgroup " << fixed3(r.p_subgroup) << "\n";
  out << "  SBLS       " << fixed3(r.sbls) << "   (alpha="
      << fixed3(r.config.alpha) << " beta=" << fixed3(r.config.beta)
      << " gamma=" << fixed3(r.config.gamma) << " omega="
      << fixed3(r.config.omega) << ")\n\n";

  out << "attributes:\n";
  out << "  name           K  mode  N        mAUC*  excess  NMI    vulnerability\n";
  for (const auto& a : r.attributes) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "  %-13s %2d  %-4s  %-7zu  %.3f  %.3f   %.3f  %s\n",
                  a.alignment.attribute.c_str(), a.leakage.cardinality,
                  a.leakage.mode == ScoreMode::soft_scores ? "soft" : "hard",
                  a.join_stats.joined_rows, a.alignment.m_auc_star,
                  a.leakage.excess_over_chance, a.linkage.normalized_mi,
                  to_string(a.band));
    out << line;
  }

  out << "\nsubgroups (min size " << r.config.min_subgroup_size << "):\n";
  bool any_included = false;
  for (const auto& s : r.subgroups) any_included |= s.included();
  if (!any_included) {
    out << "  no subgroups met n >= " << r.config.min_subgroup_size << "\n";
  } else {
    out << "  group                            n      L_g\n";
    for (const auto& s : r.subgroups) {
      char line[256];
      if (s.included()) {
        std::snprintf(line, sizeof(line), "  %-31s  %-5zu  %.3f\n",
                      s.key.to_string().c_str(), s.n, *s.leakage);
      } else {
        std::snprintf(line, sizeof(line), "  %-31s  %-5zu  excluded (%s)\n",
                      s.key.to_string().c_str(), s.n,
                      s.exclusion_reason.c_str());
      }
      out << line;
    }
  }

  if (!r.notes.empty()) {
    out << "\nnotes:\n";
    for (const auto& n : r.notes) out << "  - " << n << "\n";
  }
  return out.str();
}

// Table-style comparison across systems scored in one invocation.
inline std::string render_comparison_text(std::span<const SblsReport> rs) {
  using detail::fixed3;
  std::ostringstream out;
  out << "system          P_attr  P_assoc  P_subgroup  SBLS\n";
  for (const auto& r : rs) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-14s  %.3f   %.3f    %.3f       %.3f\n",
                  r.system_name.empty() ? "-" : r.system_name.c_str(),
                  r.p_attr, r.p_assoc, r.p_subgroup, r.sbls);
    out << line;
  }
  return out.str();
}

inline std::string emit_report(const SblsReport& r, ReportFormat format) {
  if (format == ReportFormat::json) return report_to_json(r).dump(2) + "\n";
  return render_text(r);
}

// Per-cell leakage table for external plotting:
// group_key,n,L_g,<attr>_m_auc,...
inline std::string subgroup_heatmap_csv(const SblsReport& r) {
  std::ostringstream out;
  out << "group_key,n,L_g";
  for (const auto& a : r.attributes)
    out << "," << csv_escape(a.alignment.attribute + "_m_auc");
  out << "\n";
  for (const auto& s : r.subgroups) {
    out << csv_escape(s.key.to_string()) << "," << s.n << ",";
    if (s.included()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", *s.leakage);
      out << buf;
    } else {
      out << "excluded";
    }
    for (const auto& v : s.per_attribute_m_auc) {
      out << ",";
      if (v.has_value()) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", *v);
        out << buf;
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace sbls
