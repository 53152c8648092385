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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbls/csv.hpp"
#include "sbls/digest.hpp"
#include "sbls/error.hpp"
#include "sbls/math.hpp"
#include "sbls/rng.hpp"
#include "sbls/schema.hpp"

namespace sbls {

// How scores relate to the true label:
//   independent - label-free N(0,1) columns; attacker is at chance
//   bijective   - one-hot at a fixed class rotation; perfect attacker
//   noisy       - one-hot at the true class w.p. p_correct, else uniform
//                 over the wrong classes
//   binormal    - N(0,1) columns with the true-class column shifted so the
//                 expected one-vs-rest AUC equals target_auc
enum class SynthLinkage { independent, bijective, noisy, binormal };

inline const char* to_string(SynthLinkage l) {
  switch (l) {
    case SynthLinkage::independent: return "independent";
    case SynthLinkage::bijective: return "bijective";
    case SynthLinkage::noisy: return "noisy";
    case SynthLinkage::binormal: return "binormal";
  }
  return "?";
}

struct SynthAttribute {
  std::string name;
  std::vector<std::string> classes;
  std::vector<double> prior;  // sums to 1
  SynthLinkage linkage = SynthLinkage::independent;
  double p_correct = 0.0;    // noisy
  double target_auc = 0.5;   // binormal

  int cardinality() const { return static_cast<int>(classes.size()); }
};

// Attacker-strength override for rows matching a label-value condition,
// e.g. make the attacker stronger on {sex=male} rows for attribute "age".
struct SynthSkew {
  std::vector<std::pair<std::string, std::string>> where;
  std::string attribute;
  std::optional<double> target_auc;
  std::optional<double> p_correct;
};

struct SynthSpec {
  std::uint64_t seed = 0;
  std::int64_t n_rows = 0;
  std::vector<SynthAttribute> attributes;
  std::vector<SynthSkew> skews;

  void validate() const;
  static SynthSpec from_json(const nlohmann::json& j, const std::string& src);
  static SynthSpec load(const std::string& path);
};

inline void SynthSpec::validate() const {
  if (n_rows < 1) throw Error(errc::invalid_spec, "n_rows must be >= 1");
  if (attributes.empty())
    throw Error(errc::invalid_spec, "spec declares no attributes");
  for (const auto& a : attributes) {
    const int k = a.cardinality();
    if (k < 2)
      throw Error(errc::invalid_spec,
                  "attribute '" + a.name + "' needs at least 2 classes");
    if (static_cast<int>(a.prior.size()) != k)
      throw Error(errc::invalid_spec,
                  "prior length mismatch for attribute '" + a.name + "'");
    double sum = 0.0;
    for (double p : a.prior) {
      if (p < 0.0)
        throw Error(errc::invalid_spec,
                    "negative prior for attribute '" + a.name + "'");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw Error(errc::invalid_spec,
                  "prior of attribute '" + a.name + "' must sum to 1");
    if (a.linkage == SynthLinkage::noisy &&
        (a.p_correct < 1.0 / k || a.p_correct > 1.0))
      throw Error(errc::invalid_spec,
                  "p_correct must lie in [1/K, 1] for attribute '" + a.name +
                      "'");
    if (a.linkage == SynthLinkage::binormal &&
        (a.target_auc < 0.5 || a.target_auc >= 1.0))
      throw Error(errc::invalid_spec,
                  "target_auc must lie in [0.5, 1) for attribute '" + a.name +
                      "'");
  }
  for (const auto& s : skews) {
    auto find_attr = [&](const std::string& n) -> const SynthAttribute* {
      for (const auto& a : attributes)
        if (a.name == n) return &a;
      return nullptr;
    };
    const SynthAttribute* target = find_attr(s.attribute);
    if (target == nullptr)
      throw Error(errc::invalid_spec,
                  "skew targets unknown attribute '" + s.attribute + "'");
    for (const auto& [field, value] : s.where) {
      const SynthAttribute* cond = find_attr(field);
      if (cond == nullptr)
        throw Error(errc::invalid_spec,
                    "skew condition on unknown attribute '" + field + "'");
      if (std::find(cond->classes.begin(), cond->classes.end(), value) ==
          cond->classes.end())
        throw Error(errc::invalid_spec, "skew condition value '" + value +
                                            "' is not a class of '" + field +
                                            "'");
    }
    if (s.target_auc && (*s.target_auc < 0.5 || *s.target_auc >= 1.0))
      throw Error(errc::invalid_spec, "skew target_auc out of range");
    if (s.p_correct &&
        (*s.p_correct < 1.0 / target->cardinality() || *s.p_correct > 1.0))
      throw Error(errc::invalid_spec, "skew p_correct out of range");
  }
}

inline SynthSpec SynthSpec::from_json(const nlohmann::json& j,
                                      const std::string& src) {
  SynthSpec spec;
  try {
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.n_rows = j.at("n_rows").get<std::int64_t>();
    for (const auto& aj : j.at("attributes")) {
      SynthAttribute a;
      a.name = aj.at("name").get<std::string>();
      if (aj.contains("classes")) {
        a.classes = aj.at("classes").get<std::vector<std::string>>();
      } else {
        const int k = aj.at("k").get<int>();
        for (int i = 1; i <= k; ++i)
          a.classes.push_back("class_" + std::to_string(i));
      }
      if (aj.contains("prior")) {
        a.prior = aj.at("prior").get<std::vector<double>>();
      } else {
        a.prior.assign(a.classes.size(),
                       1.0 / static_cast<double>(a.classes.size()));
      }
      const std::string linkage = aj.at("linkage").get<std::string>();
      if (linkage == "independent") a.linkage = SynthLinkage::independent;
      else if (linkage == "bijective") a.linkage = SynthLinkage::bijective;
      else if (linkage == "noisy") a.linkage = SynthLinkage::noisy;
      else if (linkage == "binormal") a.linkage = SynthLinkage::binormal;
      else
        throw Error(errc::invalid_spec,
                    "unknown linkage '" + linkage + "'", src);
      if (a.linkage == SynthLinkage::noisy)
        a.p_correct = aj.at("p_correct").get<double>();
      if (a.linkage == SynthLinkage::binormal)
        a.target_auc = aj.at("target_auc").get<double>();
      spec.attributes.push_back(std::move(a));
    }
    if (j.contains("subgroup_skews")) {
      for (const auto& sj : j.at("subgroup_skews")) {
        SynthSkew s;
        for (const auto& [field, value] : sj.at("where").items())
          s.where.emplace_back(field, value.get<std::string>());
        s.attribute = sj.at("attribute").get<std::string>();
        if (sj.contains("target_auc"))
          s.target_auc = sj.at("target_auc").get<double>();
        if (sj.contains("p_correct"))
          s.p_correct = sj.at("p_correct").get<double>();
        spec.skews.push_back(std::move(s));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::invalid_spec, std::string("bad spec: ") + e.what(), src);
  }
  spec.validate();
  return spec;
}

inline SynthSpec SynthSpec::load(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(errc::parse_failure, "invalid JSON", path);
  return from_json(j, path);
}

struct SynthManifest {
  std::string schema_path;
  std::string label_path;
  std::vector<std::pair<std::string, std::string>> score_paths;  // attr, path
  std::vector<std::pair<std::string, std::string>> digests;      // path, hex
};

namespace detail {

// Largest-remainder class counts for prior * n. Deterministic and exact:
// uniform priors with divisible n give exactly equal counts, which keeps
// the bijective-linkage endpoint exact downstream.
inline std::vector<std::int64_t> quota_counts(const std::vector<double>& prior,
                                              std::int64_t n) {
  const std::size_t k = prior.size();
  std::vector<std::int64_t> counts(k);
  std::vector<std::pair<double, std::size_t>> remainders(k);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = prior[i] * static_cast<double>(n);
    counts[i] = static_cast<std::int64_t>(std::floor(exact));
    assigned += counts[i];
    remainders[i] = {exact - std::floor(exact), i};
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::int64_t r = 0; r < n - assigned; ++r)
    ++counts[remainders[static_cast<std::size_t>(r)].second];
  return counts;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::io_failure, "cannot write " + path);
  out << content;
  if (!out) throw Error(errc::io_failure, "write failed: " + path);
}

}  // namespace detail

// Generates a dataset on disk: schema.json, labels.csv and one
// scores_<attribute>.csv per attribute. Same seed, same bytes.
inline SynthManifest generate(const SynthSpec& spec,
                              const std::string& out_dir) {
  spec.validate();
  std::filesystem::create_directories(out_dir);
  SplitMix64 rng(spec.seed);

  const std::int64_t n = spec.n_rows;
  const std::size_t n_attrs = spec.attributes.size();

  // Segment ids, zero-padded so lexicographic order equals numeric order.
  int width = 1;
  for (std::int64_t v = n - 1; v >= 10; v /= 10) ++width;
  std::vector<std::string> ids(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    ids[static_cast<std::size_t>(i)] =
        "seg-" + std::string(width - digits.size(), '0') + digits;
  }

  // Labels: exact quota per class, then one shuffle per attribute.
  std::vector<std::vector<int>> labels(n_attrs);
  for (std::size_t a = 0; a < n_attrs; ++a) {
    auto counts = detail::quota_counts(spec.attributes[a].prior, n);
    std::vector<int> column;
    column.reserve(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < counts.size(); ++k)
      column.insert(column.end(), static_cast<std::size_t>(counts[k]),
                    static_cast<int>(k));
    rng.shuffle(column);
    labels[a] = std::move(column);
  }

  // Attacker strength per row: last matching skew wins.
  auto row_matches = [&](const SynthSkew& s, std::int64_t row) {
    for (const auto& [field, value] : s.where) {
      for (std::size_t a = 0; a < n_attrs; ++a) {
        if (spec.attributes[a].name != field) continue;
        if (spec.attributes[a]
                .classes[static_cast<std::size_t>(
                    labels[a][static_cast<std::size_t>(row)])] != value)
          return false;
      }
    }
    return true;
  };

  // Scores, attribute by attribute, row by row.
  std::vector<std::vector<std::vector<double>>> scores(n_attrs);
  for (std::size_t a = 0; a < n_attrs; ++a) {
    const SynthAttribute& attr = spec.attributes[a];
    const int k = attr.cardinality();
    scores[a].assign(static_cast<std::size_t>(n), std::vector<double>(k, 0.0));
    for (std::int64_t i = 0; i < n; ++i) {
      const int truth = labels[a][static_cast<std::size_t>(i)];
      double target_auc = attr.target_auc;
      double p_correct = attr.p_correct;
      for (const auto& s : spec.skews) {
        if (s.attribute != attr.name || !row_matches(s, i)) continue;
        if (s.target_auc) target_auc = *s.target_auc;
        if (s.p_correct) p_correct = *s.p_correct;
      }
      auto& row = scores[a][static_cast<std::size_t>(i)];
      switch (attr.linkage) {
        case SynthLinkage::independent:
          for (int c = 0; c < k; ++c) row[c] = rng.next_normal();
          break;
        case SynthLinkage::bijective:
          row[(truth + 1) % k] = 1.0;
          break;
        case SynthLinkage::noisy: {
          int predicted = truth;
          if (rng.next_double() >= p_correct) {
            int wrong = static_cast<int>(
                rng.next_below(static_cast<std::uint64_t>(k - 1)));
            predicted = wrong >= truth ? wrong + 1 : wrong;
          }
          row[predicted] = 1.0;
          break;
        }
        case SynthLinkage::binormal: {
          // positives ~ N(delta, 1), negatives ~ N(0, 1) gives a one-vs-rest
          // AUC of Phi(delta / sqrt(2)).
          const double delta =
              std::sqrt(2.0) * inverse_normal_cdf(target_auc);
          for (int c = 0; c < k; ++c) row[c] = rng.next_normal();
          row[truth] += delta;
          break;
        }
      }
    }
  }

  // Serialize.
  SynthManifest manifest;
  auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path =
        (std::filesystem::path(out_dir) / name).string();
    detail::write_text_file(path, content);
    manifest.digests.emplace_back(path, digest_hex(fnv1a64(content)));
    return path;
  };

  std::vector<Attribute> schema_attrs;
  for (const auto& a : spec.attributes)
    schema_attrs.push_back({a.name, a.classes});
  manifest.schema_path =
      emit("schema.json",
           AttributeSchema::from_attributes(schema_attrs).to_json().dump(2) +
               "\n");

  std::string label_csv = "segment_id";
  for (const auto& a : spec.attributes) label_csv += "," + csv_escape(a.name);
  label_csv += "\n";
  for (std::int64_t i = 0; i < n; ++i) {
    label_csv += ids[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < n_attrs; ++a)
      label_csv +=
          "," + csv_escape(spec.attributes[a].classes[static_cast<std::size_t>(
                    labels[a][static_cast<std::size_t>(i)])]);
    label_csv += "\n";
  }
  manifest.label_path = emit("labels.csv", label_csv);

  for (std::size_t a = 0; a < n_attrs; ++a) {
    const SynthAttribute& attr = spec.attributes[a];
    std::string csv = "segment_id";
    for (const auto& c : attr.classes) csv += "," + csv_escape(c);
    csv += "\n";
    for (std::int64_t i = 0; i < n; ++i) {
      csv += ids[static_cast<std::size_t>(i)];
      for (double v : scores[a][static_cast<std::size_t>(i)])
        csv += "," + format_double(v);
      csv += "\n";
    }
    manifest.score_paths.emplace_back(
        attr.name, emit("scores_" + attr.name + ".csv", csv));
  }
  return manifest;
}

}  // namespace sbls
