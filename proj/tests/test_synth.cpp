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

#include "sbls/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "sbls/pipeline.hpp"
#include "test_util.hpp"

namespace {

using testutil::TempDir;

sbls::SynthSpec parse_spec(const std::string& json) {
  return sbls::SynthSpec::from_json(nlohmann::json::parse(json), "inline");
}

sbls::Dataset load_generated(const sbls::SynthManifest& m) {
  auto schema = sbls::load_schema(m.schema_path);
  std::vector<std::pair<std::string, std::string>> score_paths;
  for (const auto& [attr, path] : m.score_paths)
    score_paths.emplace_back(attr, path);
  return sbls::load_dataset(schema, score_paths, m.label_path);
}

TEST(SynthSpec, ParsesAndValidates) {
  auto spec = parse_spec(R"({
    "seed": 7, "n_rows": 100,
    "attributes": [
      {"name": "sex", "classes": ["m", "f"], "prior": [0.5, 0.5],
       "linkage": "binormal", "target_auc": 0.8},
      {"name": "age", "k": 3, "linkage": "noisy", "p_correct": 0.6}
    ],
    "subgroup_skews": [
      {"where": {"sex": "m"}, "attribute": "age", "p_correct": 0.9}
    ]})");
  EXPECT_EQ(spec.seed, 7u);
  EXPECT_EQ(spec.attributes[1].classes.size(), 3u);
  EXPECT_EQ(spec.attributes[1].prior[0], 1.0 / 3.0);
  EXPECT_EQ(spec.skews.size(), 1u);
}

TEST(SynthSpec, RejectsBadPriors) {
  EXPECT_THROW(parse_spec(R"({"seed": 1, "n_rows": 10, "attributes": [
      {"name": "a", "k": 2, "prior": [0.9, 0.3],
       "linkage": "independent"}]})"),
               sbls::Error);
  EXPECT_THROW(parse_spec(R"({"seed": 1, "n_rows": 10, "attributes": [
      {"name": "a", "k": 2, "prior": [-0.5, 1.5],
       "linkage": "independent"}]})"),
               sbls::Error);
}

TEST(SynthSpec, RejectsOutOfRangeParameters) {
  EXPECT_THROW(parse_spec(R"({"seed": 1, "n_rows": 10, "attributes": [
      {"name": "a", "k": 2, "linkage": "noisy", "p_correct": 0.2}]})"),
               sbls::Error);
  EXPECT_THROW(parse_spec(R"({"seed": 1, "n_rows": 10, "attributes": [
      {"name": "a", "k": 2, "linkage": "binormal", "target_auc": 1.2}]})"),
               sbls::Error);
  EXPECT_THROW(parse_spec(R"({"seed": 1, "n_rows": 0, "attributes": [
      {"name": "a", "k": 2, "linkage": "independent"}]})"),
               sbls::Error);
}

TEST(QuotaCounts, ExactAndDeterministic) {
  auto counts = sbls::detail::quota_counts({0.5, 0.5}, 10);
  EXPECT_EQ(counts, (std::vector<std::int64_t>{5, 5}));
  counts = sbls::detail::quota_counts({0.2, 0.6, 0.2}, 10);
  EXPECT_EQ(counts, (std::vector<std::int64_t>{2, 6, 2}));
  // Remainders: 0.1*7=0.7, 0.3*7=2.1, 0.6*7=4.2 -> floors 0,2,4 plus one
  // to the largest remainder (index 0).
  counts = sbls::detail::quota_counts({0.1, 0.3, 0.6}, 7);
  EXPECT_EQ(counts, (std::vector<std::int64_t>{1, 2, 4}));
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  EXPECT_EQ(total, 7);
}

TEST(Generate, SameSeedSameBytes) {
  const char* spec_json = R"({
    "seed": 99, "n_rows": 200,
    "attributes": [
      {"name": "sex", "k": 2, "linkage": "binormal", "target_auc": 0.75},
      {"name": "age", "k": 3, "linkage": "noisy", "p_correct": 0.5}
    ]})";
  TempDir d1("synth_det_1"), d2("synth_det_2"), d3("synth_det_3");
  auto m1 = sbls::generate(parse_spec(spec_json), d1.str());
  auto m2 = sbls::generate(parse_spec(spec_json), d2.str());
  ASSERT_EQ(m1.digests.size(), m2.digests.size());
  for (std::size_t i = 0; i < m1.digests.size(); ++i)
    EXPECT_EQ(m1.digests[i].second, m2.digests[i].second)
        << m1.digests[i].first;

  auto spec3 = parse_spec(spec_json);
  spec3.seed = 100;
  auto m3 = sbls::generate(spec3, d3.str());
  bool any_differs = false;
  for (std::size_t i = 0; i < m3.digests.size(); ++i)
    any_differs |= m3.digests[i].second != m1.digests[i].second;
  EXPECT_TRUE(any_differs);
}

TEST(Generate, OutputPassesDataModelValidation) {
  TempDir dir("synth_valid");
  auto manifest = sbls::generate(parse_spec(R"({
    "seed": 5, "n_rows": 500,
    "attributes": [
      {"name": "sex", "classes": ["male", "female"],
       "linkage": "binormal", "target_auc": 0.7},
      {"name": "age", "classes": ["young", "adult", "senior"],
       "prior": [0.2, 0.6, 0.2], "linkage": "independent"}
    ]})"),
                                 dir.str());
  auto data = load_generated(manifest);
  for (const auto& j : data.joined) {
    EXPECT_EQ(j.size(), 500u);
    EXPECT_EQ(j.stats.score_only, 0u);
    EXPECT_EQ(j.stats.label_only, 0u);
    EXPECT_EQ(j.stats.missing_label, 0u);
  }
}

TEST(Generate, BijectiveEndpointIsExact) {
  TempDir dir("synth_bijective");
  auto manifest = sbls::generate(parse_spec(R"({
    "seed": 11, "n_rows": 1000,
    "attributes": [
      {"name": "sex", "k": 2, "linkage": "bijective"},
      {"name": "dialect", "k": 2, "linkage": "bijective"}
    ]})"),
                                 dir.str());
  auto data = load_generated(manifest);
  sbls::EvaluationOptions options;
  auto report = sbls::evaluate(data, options);

  for (const auto& a : report.attributes) {
    EXPECT_EQ(a.alignment.m_auc_star, 1.0);
    EXPECT_EQ(a.linkage.normalized_mi, 1.0);
    // The rotation is recovered, not the identity.
    EXPECT_EQ(a.alignment.permutation, (std::vector<int>{1, 0}));
  }
  EXPECT_EQ(report.p_attr, 0.0);
  EXPECT_EQ(report.p_assoc, 0.0);
}

// The calibration identity behind the binormal model, checked by numeric
// integration: P(N(delta,1) > N(0,1)) = integral phi(x-delta) Phi(x) dx
// must equal Phi(delta / sqrt(2)).
TEST(Binormal, CalibrationFormulaByQuadrature) {
  for (double target : {0.6, 0.75, 0.9, 0.97}) {
    const double delta = std::sqrt(2.0) * sbls::inverse_normal_cdf(target);
    const double lo = delta - 12.0, hi = delta + 12.0;
    const int steps = 48000;
    const double h = (hi - lo) / steps;
    auto integrand = [&](double x) {
      const double z = x - delta;
      return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI) *
             sbls::normal_cdf(x);
    };
    double sum = 0.5 * (integrand(lo) + integrand(hi));
    for (int i = 1; i < steps; ++i) sum += integrand(lo + i * h);
    const double auc = sum * h;
    EXPECT_NEAR(auc, target, 1e-9) << "target " << target;
    EXPECT_NEAR(auc, sbls::normal_cdf(delta / std::sqrt(2.0)), 1e-9);
  }
}

TEST(Binormal, MeasuredAucMatchesTarget) {
  TempDir dir("synth_binormal");
  auto manifest = sbls::generate(parse_spec(R"({
    "seed": 21, "n_rows": 50000,
    "attributes": [
      {"name": "sex", "k": 2, "linkage": "binormal", "target_auc": 0.9}
    ]})"),
                                 dir.str());
  auto data = load_generated(manifest);
  auto aligned = sbls::align_permutation(data.joined[0]);
  EXPECT_GE(aligned.m_auc_star, 0.89);
  EXPECT_LE(aligned.m_auc_star, 0.91);
}

TEST(Noisy, MeasuredNmiMatchesAnalyticJoint) {
  const double p = 0.7;
  const int k = 3;
  TempDir dir("synth_noisy");
  auto manifest = sbls::generate(parse_spec(R"({
    "seed": 31, "n_rows": 50000,
    "attributes": [
      {"name": "age", "k": 3, "linkage": "noisy", "p_correct": 0.7}
    ]})"),
                                 dir.str());
  auto data = load_generated(manifest);
  auto aligned = sbls::align_permutation(data.joined[0]);
  auto preds = sbls::hard_predictions(data.joined[0], aligned);
  auto cm = sbls::ConfusionMatrix::from_predictions(data.joined[0].labels,
                                                    preds, k);
  auto mi = sbls::mutual_information(cm);

  // Analytic joint: P(truth, pred) = (1/K) * [p if equal else (1-p)/(K-1)].
  double analytic = 0.0;
  for (int t = 0; t < k; ++t) {
    for (int j = 0; j < k; ++j) {
      const double joint =
          (1.0 / k) * (t == j ? p : (1.0 - p) / (k - 1));
      const double marginal_pred =
          (1.0 / k) * p + (1.0 - 1.0 / k) * (1.0 - p) / (k - 1);
      analytic += joint * std::log(joint / ((1.0 / k) * marginal_pred));
    }
  }
  const double analytic_nmi = analytic / std::log(static_cast<double>(k));
  EXPECT_NEAR(mi.normalized_mi, analytic_nmi, 0.02);
}

TEST(Independent, StaysNearChanceAtTenThousandRows) {
  TempDir dir("synth_indep");
  auto manifest = sbls::generate(parse_spec(R"({
    "seed": 41, "n_rows": 10000,
    "attributes": [
      {"name": "sex", "k": 2, "linkage": "independent"}
    ]})"),
                                 dir.str());
  auto data = load_generated(manifest);
  auto aligned = sbls::align_permutation(data.joined[0]);
  auto leak = sbls::attribute_excess(aligned, sbls::ScoreMode::soft_scores, 2);
  std::vector<sbls::AttributeLeakage> ls{leak};
  const double p_attr = sbls::p_attr(ls);
  EXPECT_GE(p_attr, 0.95);
  EXPECT_LE(p_attr, 1.0);
}

TEST(Independent, FullPipelineScoresHighWithDefaults) {
  // Two label-free attributes at N = 10,000: every component concentrates
  // near its no-leakage endpoint, so the composite stays above 0.93.
  TempDir dir("synth_indep_pipeline");
  auto manifest = sbls::generate(parse_spec(R"({
    "seed": 61, "n_rows": 10000,
    "attributes": [
      {"name": "sex", "k": 2, "linkage": "independent"},
      {"name": "age", "k": 3, "prior": [0.25, 0.5, 0.25],
       "linkage": "independent"}
    ]})"),
                                 dir.str());
  auto data = load_generated(manifest);
  sbls::EvaluationOptions options;
  auto report = sbls::evaluate(data, options);
  EXPECT_GE(report.p_attr, 0.95);
  EXPECT_GE(report.p_assoc, 0.98);
  EXPECT_GE(report.p_subgroup, 0.8);
  EXPECT_GE(report.sbls, 0.93);
}

TEST(Skews, OverrideMakesTargetCellLeakier) {
  TempDir dir("synth_skew");
  auto manifest = sbls::generate(parse_spec(R"({
    "seed": 51, "n_rows": 4000,
    "attributes": [
      {"name": "sex", "k": 2, "linkage": "independent"},
      {"name": "age", "k": 2, "linkage": "binormal", "target_auc": 0.55}
    ],
    "subgroup_skews": [
      {"where": {"sex": "class_1"}, "attribute": "age", "target_auc": 0.95}
    ]})"),
                                 dir.str());
  auto data = load_generated(manifest);
  sbls::EvaluationOptions options;
  auto report = sbls::evaluate(data, options);

  // The sex=class_1 marginal cell must stand out in age leakage.
  double skewed = -1.0, other = -1.0;
  for (const auto& s : report.subgroups) {
    if (s.key.to_string() == "sex=class_1") skewed = *s.per_attribute_m_auc[1];
    if (s.key.to_string() == "sex=class_2") other = *s.per_attribute_m_auc[1];
  }
  ASSERT_GE(skewed, 0.0);
  ASSERT_GE(other, 0.0);
  EXPECT_GT(skewed, 0.9);
  EXPECT_LT(other, 0.65);
}

}  // namespace
