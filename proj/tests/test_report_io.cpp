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

#include "sbls/report_io.hpp"

#include <gtest/gtest.h>

#include <string>

namespace {

// A report exercising every optional path: absent classes, excluded
// subgroup cells, metadata provenance, notes.
sbls::SblsReport sample_report() {
  sbls::EvaluationConfig config;
  sbls::SblsReport r = sbls::compose(0.690, 0.950, 0.332, config);
  r.system_name = "demo";
  r.grouping_fields = {"sex", "age"};
  r.schema_input = {"schema.json", "0011223344556677"};
  r.label_input = {"labels.csv", "8899aabbccddeeff"};
  r.score_inputs["sex"] = {"scores_sex.csv", "0123456789abcdef"};
  r.notes = {"check the banding thresholds"};

  sbls::AttributeDiagnostics a;
  a.alignment.attribute = "sex";
  a.alignment.permutation = {1, 0};
  a.alignment.per_class_auc = {0.721, std::nullopt};
  a.alignment.m_auc_star = 0.721;
  a.alignment.present_classes = 1;
  a.leakage.attribute = "sex";
  a.leakage.m_auc_star = 0.721;
  a.leakage.excess_over_chance = 0.442;
  a.leakage.cardinality = 2;
  a.confusion.attribute = "sex";
  a.confusion.counts = {{3, 2}, {2, 3}};
  a.confusion.total = 10;
  a.linkage.attribute = "sex";
  a.linkage.mutual_information = 0.02013551;
  a.linkage.normalized_mi = 0.029049;
  a.linkage.entropy_true = 0.6931471;
  a.linkage.entropy_pred = 0.6931471;
  a.join_stats = {10, 1, 2, 3};
  a.band = sbls::VulnerabilityBand::noticeable;
  r.attributes.push_back(a);

  sbls::SubgroupReport included;
  included.key.fields = {{"sex", "male"}, {"age", "young"}};
  included.n = 17;
  included.leakage = 0.25;
  included.per_attribute_m_auc = {0.625, std::nullopt};
  r.subgroups.push_back(included);

  sbls::SubgroupReport excluded;
  excluded.key.fields = {{"sex", "female"}, {"age", "senior"}};
  excluded.n = 7;
  excluded.exclusion_reason = "n < 10";
  excluded.per_attribute_m_auc = {std::nullopt, std::nullopt};
  r.subgroups.push_back(excluded);
  return r;
}

TEST(ReportJson, RoundTripsLosslessly) {
  sbls::SblsReport r = sample_report();
  const std::string text = sbls::emit_report(r, sbls::ReportFormat::json);
  sbls::SblsReport back = sbls::report_from_json(nlohmann::json::parse(text));

  EXPECT_EQ(back.system_name, r.system_name);
  EXPECT_EQ(back.p_attr, r.p_attr);
  EXPECT_EQ(back.p_assoc, r.p_assoc);
  EXPECT_EQ(back.p_subgroup, r.p_subgroup);
  EXPECT_EQ(back.sbls, r.sbls);
  EXPECT_EQ(back.config.alpha, r.config.alpha);
  EXPECT_EQ(back.config.min_subgroup_size, r.config.min_subgroup_size);
  ASSERT_EQ(back.attributes.size(), 1u);
  EXPECT_EQ(back.attributes[0].alignment.permutation,
            r.attributes[0].alignment.permutation);
  EXPECT_EQ(back.attributes[0].alignment.per_class_auc,
            r.attributes[0].alignment.per_class_auc);
  EXPECT_EQ(back.attributes[0].confusion.counts,
            r.attributes[0].confusion.counts);
  EXPECT_EQ(back.attributes[0].linkage.mutual_information,
            r.attributes[0].linkage.mutual_information);
  EXPECT_EQ(back.attributes[0].join_stats.missing_label, 3u);
  EXPECT_EQ(sbls::to_string(back.attributes[0].band),
            sbls::to_string(r.attributes[0].band));
  ASSERT_EQ(back.subgroups.size(), 2u);
  EXPECT_EQ(back.subgroups[0].key, r.subgroups[0].key);
  EXPECT_EQ(back.subgroups[0].leakage, r.subgroups[0].leakage);
  EXPECT_EQ(back.subgroups[1].exclusion_reason, "n < 10");
  EXPECT_EQ(back.score_inputs.at("sex").digest, "0123456789abcdef");
  EXPECT_EQ(back.notes, r.notes);

  // Serializing the parsed report reproduces the bytes: nothing is lost.
  EXPECT_EQ(sbls::emit_report(back, sbls::ReportFormat::json), text);
}

TEST(ReportJson, VersionMismatchRejected) {
  nlohmann::json j = sbls::report_to_json(sample_report());
  j["report_version"] = 0;
  try {
    sbls::report_from_json(j);
    FAIL() << "expected VersionMismatch";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::version_mismatch);
  }
}

TEST(ReportText, ShowsComponentsAndRows) {
  const std::string text =
      sbls::emit_report(sample_report(), sbls::ReportFormat::text);
  EXPECT_NE(text.find("P_attr     0.690"), std::string::npos);
  EXPECT_NE(text.find("P_assoc    0.950"), std::string::npos);
  EXPECT_NE(text.find("P_subgroup 0.332"), std::string::npos);
  EXPECT_NE(text.find("SBLS       0.722"), std::string::npos);
  EXPECT_NE(text.find("sex"), std::string::npos);
  EXPECT_NE(text.find("Noticeable"), std::string::npos);
  EXPECT_NE(text.find("sex=male|age=young"), std::string::npos);
  EXPECT_NE(text.find("excluded (n < 10)"), std::string::npos);
}

TEST(ReportText, EmptySubgroupTableSaysSo) {
  sbls::SblsReport r = sample_report();
  for (auto& s : r.subgroups) {
    s.leakage.reset();
    s.exclusion_reason = "n < 10";
  }
  const std::string text = sbls::emit_report(r, sbls::ReportFormat::text);
  EXPECT_NE(text.find("no subgroups met n >= 10"), std::string::npos);
}

TEST(ComparisonText, OneRowPerSystem) {
  std::vector<sbls::SblsReport> rs{sample_report(), sample_report()};
  rs[1].system_name = "other";
  const std::string text = sbls::render_comparison_text(rs);
  EXPECT_NE(text.find("system"), std::string::npos);
  EXPECT_NE(text.find("demo"), std::string::npos);
  EXPECT_NE(text.find("other"), std::string::npos);
  EXPECT_NE(text.find("0.722"), std::string::npos);
}

TEST(HeatmapCsv, OneLinePerCell) {
  const std::string csv = sbls::subgroup_heatmap_csv(sample_report());
  EXPECT_NE(csv.find("group_key,n,L_g,sex_m_auc"), std::string::npos);
  EXPECT_NE(csv.find("sex=male|age=young,17,0.250000,0.625000,"),
            std::string::npos);
  EXPECT_NE(csv.find("sex=female|age=senior,7,excluded,,"), std::string::npos);
}

}  // namespace
