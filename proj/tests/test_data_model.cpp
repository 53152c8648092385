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

#include "sbls/tables.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "sbls/alignment.hpp"
#include "sbls/rng.hpp"
#include "sbls/schema.hpp"
#include "test_util.hpp"

namespace {

using testutil::TempDir;
using testutil::write_file;

const char* kSchemaJson = R"({
  "attributes": [
    {"name": "sex", "classes": ["male", "female"]},
    {"name": "age", "classes": ["young", "adult", "senior"]}
  ]
})";

sbls::AttributeSchema demo_schema(const TempDir& dir) {
  write_file(dir.file("schema.json"), kSchemaJson);
  return sbls::load_schema(dir.file("schema.json"));
}

TEST(Schema, ReadBack) {
  TempDir dir("schema_readback");
  auto schema = demo_schema(dir);
  ASSERT_EQ(schema.size(), 2u);
  EXPECT_EQ(schema.at(0).name, "sex");
  EXPECT_EQ(schema.at(0).cardinality(), 2);
  EXPECT_EQ(schema.at(1).name, "age");
  EXPECT_EQ(schema.at(1).cardinality(), 3);
  EXPECT_EQ(schema.at(1).classes[1], "adult");
}

TEST(Schema, DuplicateClassRejected) {
  TempDir dir("schema_dupclass");
  write_file(dir.file("schema.json"),
             R"({"attributes": [{"name": "age",
                 "classes": ["adult", "adult"]}]})");
  try {
    sbls::load_schema(dir.file("schema.json"));
    FAIL() << "expected DuplicateClass";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::duplicate_class);
  }
}

TEST(Schema, SingleClassAttributeRejected) {
  TempDir dir("schema_degenerate");
  write_file(dir.file("schema.json"),
             R"({"attributes": [{"name": "lang", "classes": ["en"]}]})");
  try {
    sbls::load_schema(dir.file("schema.json"));
    FAIL() << "expected DegenerateAttribute";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::degenerate_attribute);
  }
}

TEST(Schema, DuplicateAttributeRejected) {
  TempDir dir("schema_dupattr");
  write_file(dir.file("schema.json"),
             R"({"attributes": [
                  {"name": "sex", "classes": ["m", "f"]},
                  {"name": "sex", "classes": ["a", "b"]}]})");
  try {
    sbls::load_schema(dir.file("schema.json"));
    FAIL() << "expected DuplicateAttribute";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::duplicate_attribute);
  }
}

TEST(Schema, BadJsonRejected) {
  TempDir dir("schema_badjson");
  write_file(dir.file("schema.json"), "{not json");
  try {
    sbls::load_schema(dir.file("schema.json"));
    FAIL() << "expected ParseFailure";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::parse_failure);
  }
}

TEST(ScoreTable, LoadsAndMapsColumnsByName) {
  TempDir dir("scores_map");
  auto schema = demo_schema(dir);
  // Columns deliberately in reverse order; values in scientific notation.
  write_file(dir.file("scores_sex.csv"),
             "segment_id,female,male\n"
             "a,1e-1,0.9\n"
             "b,8.0e-1,0.2\n");
  auto t = sbls::load_score_table(dir.file("scores_sex.csv"), schema);
  EXPECT_EQ(t.attribute, "sex");
  ASSERT_EQ(t.size(), 2u);
  // Row "a": male 0.9, female 0.1, in schema order.
  EXPECT_EQ(t.rows[0][0], 0.9);
  EXPECT_EQ(t.rows[0][1], 0.1);
}

TEST(ScoreTable, AcceptsBomAndCrlf) {
  TempDir dir("scores_bom");
  auto schema = demo_schema(dir);
  write_file(dir.file("scores_sex.csv"),
             "\xef\xbb\xbfsegment_id,male,female\r\n"
             "a,0.9,0.1\r\n"
             "b,0.2,0.8\r\n");
  auto t = sbls::load_score_table(dir.file("scores_sex.csv"), schema);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.rows[1][1], 0.8);
}

TEST(ScoreTable, HeaderWidthMismatch) {
  TempDir dir("scores_width");
  auto schema = demo_schema(dir);
  write_file(dir.file("scores_age.csv"),
             "segment_id,young,adult\n"
             "a,0.5,0.5\n");
  try {
    sbls::load_score_table(dir.file("scores_age.csv"), schema, "age");
    FAIL() << "expected WidthMismatch";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::width_mismatch);
  }
}

TEST(ScoreTable, RowWidthMismatchNamesLine) {
  TempDir dir("scores_rowwidth");
  auto schema = demo_schema(dir);
  write_file(dir.file("scores_sex.csv"),
             "segment_id,male,female\n"
             "a,0.9,0.1\n"
             "b,0.2\n");
  try {
    sbls::load_score_table(dir.file("scores_sex.csv"), schema);
    FAIL() << "expected WidthMismatch";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::width_mismatch);
    EXPECT_NE(e.where().find(":3"), std::string::npos);
  }
}

TEST(ScoreTable, NonFiniteScoreRejected) {
  TempDir dir("scores_nan");
  auto schema = demo_schema(dir);
  write_file(dir.file("scores_sex.csv"),
             "segment_id,male,female\n"
             "a,nan,0.1\n");
  try {
    sbls::load_score_table(dir.file("scores_sex.csv"), schema);
    FAIL() << "expected NonFiniteScore";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::non_finite_score);
  }
}

TEST(ScoreTable, DuplicateSegmentRejected) {
  TempDir dir("scores_dup");
  auto schema = demo_schema(dir);
  write_file(dir.file("scores_sex.csv"),
             "segment_id,male,female\n"
             "a,0.9,0.1\n"
             "a,0.2,0.8\n");
  try {
    sbls::load_score_table(dir.file("scores_sex.csv"), schema);
    FAIL() << "expected DuplicateSegment";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::duplicate_segment);
  }
}

TEST(LabelTable, UnknownClassRejected) {
  TempDir dir("labels_unknown");
  auto schema = demo_schema(dir);
  write_file(dir.file("labels.csv"),
             "segment_id,sex,age\n"
             "a,male,toddler\n");
  try {
    sbls::load_label_table(dir.file("labels.csv"), schema);
    FAIL() << "expected UnknownClass";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::unknown_class);
    EXPECT_NE(e.where().find(":2"), std::string::npos);
  }
}

TEST(LabelTable, MetadataColumnsPassThrough) {
  TempDir dir("labels_meta");
  auto schema = demo_schema(dir);
  write_file(dir.file("labels.csv"),
             "segment_id,sex,age,channel\n"
             "a,male,young,phone\n"
             "b,female,adult,studio\n");
  auto t = sbls::load_label_table(dir.file("labels.csv"), schema);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"sex", "age", "channel"}));
  EXPECT_EQ(t.cells[1][2], "studio");
}

// --------------------------------------------------------------------------
// Joining

struct JoinFixture {
  TempDir dir{"join"};
  sbls::AttributeSchema schema = demo_schema(dir);
};

TEST(Join, FullOverlapKeepsEveryRow) {
  // Desk-scale mirror of a 2,983-segment corpus with full overlap.
  const int n = 2983;
  std::string scores = "segment_id,male,female\n";
  std::string labels = "segment_id,sex,age\n";
  sbls::SplitMix64 rng(1);
  for (int i = 0; i < n; ++i) {
    const std::string id = "seg" + std::to_string(100000 + i);
    const bool male = rng.next_below(2) == 0;
    scores += id + "," + (male ? "0.9,0.1" : "0.1,0.9") + "\n";
    labels += id + std::string(",") + (male ? "male" : "female") + ",adult\n";
  }
  JoinFixture f;
  write_file(f.dir.file("scores_sex.csv"), scores);
  write_file(f.dir.file("labels.csv"), labels);
  auto t = sbls::load_score_table(f.dir.file("scores_sex.csv"), f.schema);
  auto l = sbls::load_label_table(f.dir.file("labels.csv"), f.schema);
  auto j = sbls::join_attribute(t, l, f.schema);
  EXPECT_EQ(j.size(), 2983u);
  EXPECT_EQ(j.stats.score_only, 0u);
  EXPECT_EQ(j.stats.label_only, 0u);
  EXPECT_EQ(j.stats.missing_label, 0u);
}

TEST(Join, ScoreOnlyRowIsExcludedAndCounted) {
  JoinFixture f;
  write_file(f.dir.file("scores_sex.csv"),
             "segment_id,male,female\n"
             "a,0.9,0.1\n"
             "b,0.2,0.8\n"
             "ghost,0.5,0.5\n");
  write_file(f.dir.file("labels.csv"),
             "segment_id,sex,age\n"
             "a,male,young\n"
             "b,female,adult\n");
  auto t = sbls::load_score_table(f.dir.file("scores_sex.csv"), f.schema);
  auto l = sbls::load_label_table(f.dir.file("labels.csv"), f.schema);
  auto j = sbls::join_attribute(t, l, f.schema);
  EXPECT_EQ(j.size(), 2u);
  EXPECT_EQ(j.stats.score_only, 1u);
}

TEST(Join, MissingLabelExcludesOnlyThatAttribute) {
  JoinFixture f;
  write_file(f.dir.file("scores_sex.csv"),
             "segment_id,male,female\n"
             "a,0.9,0.1\nb,0.2,0.8\nc,0.7,0.3\n");
  write_file(f.dir.file("scores_age.csv"),
             "segment_id,young,adult,senior\n"
             "a,1,0,0\nb,0,1,0\nc,0,0,1\n");
  // Row c has no sex label but a valid age label.
  write_file(f.dir.file("labels.csv"),
             "segment_id,sex,age\n"
             "a,male,young\n"
             "b,female,adult\n"
             "c,,senior\n");
  auto labels = sbls::load_label_table(f.dir.file("labels.csv"), f.schema);
  auto sex = sbls::join_attribute(
      sbls::load_score_table(f.dir.file("scores_sex.csv"), f.schema), labels,
      f.schema);
  auto age = sbls::join_attribute(
      sbls::load_score_table(f.dir.file("scores_age.csv"), f.schema), labels,
      f.schema);
  EXPECT_EQ(sex.size(), 2u);
  EXPECT_EQ(sex.stats.missing_label, 1u);
  EXPECT_EQ(age.size(), 3u);
}

TEST(Join, ZeroJoinedRowsIsAnError) {
  JoinFixture f;
  write_file(f.dir.file("scores_sex.csv"),
             "segment_id,male,female\nx,0.9,0.1\n");
  write_file(f.dir.file("labels.csv"), "segment_id,sex,age\ny,male,young\n");
  auto t = sbls::load_score_table(f.dir.file("scores_sex.csv"), f.schema);
  auto l = sbls::load_label_table(f.dir.file("labels.csv"), f.schema);
  try {
    sbls::join_attribute(t, l, f.schema);
    FAIL() << "expected ZeroJoinedRows";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::zero_joined_rows);
  }
}

TEST(Join, RoundTripThroughSerializationIsStable) {
  JoinFixture f;
  write_file(f.dir.file("scores_sex.csv"),
             "segment_id,male,female\n"
             "a,0.912345678901,0.1\n"
             "b,-3.5e-2,0.8\n"
             "c,12.5,0.25\n");
  write_file(f.dir.file("labels.csv"),
             "segment_id,sex,age\n"
             "a,male,young\nb,female,adult\nc,male,senior\n");
  auto t = sbls::load_score_table(f.dir.file("scores_sex.csv"), f.schema);
  auto l = sbls::load_label_table(f.dir.file("labels.csv"), f.schema);

  write_file(f.dir.file("scores2.csv"), t.to_csv(f.schema));
  write_file(f.dir.file("labels2.csv"), l.to_csv());
  auto t2 = sbls::load_score_table(f.dir.file("scores2.csv"), f.schema);
  auto l2 = sbls::load_label_table(f.dir.file("labels2.csv"), f.schema);

  auto j1 = sbls::join_attribute(t, l, f.schema);
  auto j2 = sbls::join_attribute(t2, l2, f.schema);
  EXPECT_EQ(j1.segment_ids, j2.segment_ids);
  EXPECT_EQ(j1.labels, j2.labels);
  EXPECT_EQ(j1.scores, j2.scores);
}

TEST(Join, InputRowOrderDoesNotMatter) {
  JoinFixture f;
  write_file(f.dir.file("scores_a.csv"),
             "segment_id,male,female\n"
             "a,0.9,0.1\nb,0.2,0.8\nc,0.6,0.4\nd,0.3,0.7\n");
  write_file(f.dir.file("scores_b.csv"),
             "segment_id,male,female\n"
             "d,0.3,0.7\nb,0.2,0.8\na,0.9,0.1\nc,0.6,0.4\n");
  write_file(f.dir.file("labels_a.csv"),
             "segment_id,sex,age\n"
             "a,male,young\nb,female,adult\nc,male,senior\nd,female,young\n");
  write_file(f.dir.file("labels_b.csv"),
             "segment_id,sex,age\n"
             "c,male,senior\na,male,young\nd,female,young\nb,female,adult\n");
  auto la = sbls::load_label_table(f.dir.file("labels_a.csv"), f.schema);
  auto lb = sbls::load_label_table(f.dir.file("labels_b.csv"), f.schema);
  auto ja = sbls::join_attribute(
      sbls::load_score_table(f.dir.file("scores_a.csv"), f.schema), la,
      f.schema);
  auto jb = sbls::join_attribute(
      sbls::load_score_table(f.dir.file("scores_b.csv"), f.schema), lb,
      f.schema);
  EXPECT_EQ(ja.segment_ids, jb.segment_ids);
  EXPECT_EQ(ja.scores, jb.scores);
  // Downstream metric agrees bit for bit.
  EXPECT_EQ(sbls::align_permutation(ja).m_auc_star,
            sbls::align_permutation(jb).m_auc_star);
}

TEST(LoadDataset, WiresEveryAttribute) {
  JoinFixture f;
  write_file(f.dir.file("scores_sex.csv"),
             "segment_id,male,female\na,0.9,0.1\nb,0.2,0.8\n");
  write_file(f.dir.file("scores_age.csv"),
             "segment_id,young,adult,senior\na,1,0,0\nb,0,1,0\n");
  write_file(f.dir.file("labels.csv"),
             "segment_id,sex,age\na,male,young\nb,female,adult\n");
  auto data = sbls::load_dataset(
      f.schema,
      {{"", f.dir.file("scores_sex.csv")}, {"", f.dir.file("scores_age.csv")}},
      f.dir.file("labels.csv"));
  ASSERT_EQ(data.joined.size(), 2u);
  EXPECT_EQ(data.joined[0].attribute, "sex");
  EXPECT_EQ(data.joined[1].attribute, "age");

  // A missing score file is reported against the attribute name.
  try {
    sbls::load_dataset(f.schema, {{"", f.dir.file("scores_sex.csv")}},
                       f.dir.file("labels.csv"));
    FAIL() << "expected UnknownField";
  } catch (const sbls::Error& e) {
    EXPECT_EQ(e.code(), sbls::errc::unknown_field);
  }
}

}  // namespace
