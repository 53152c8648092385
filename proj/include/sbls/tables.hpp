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
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sbls/csv.hpp"
#include "sbls/error.hpp"
#include "sbls/schema.hpp"

namespace sbls {

// Per-attribute attacker scores: one row of K finite values per segment,
// columns in schema class order. Scores are accepted at arbitrary scale
// (probabilities or logits); nothing downstream depends on more than the
// within-column ordering and the per-row argmax.
struct ScoreTable {
  std::string attribute;
  int cardinality = 0;
  std::vector<std::string> segment_ids;
  std::vector<std::vector<double>> rows;  // parallel to segment_ids
  std::string source_path;
  std::string digest;

  std::size_t size() const { return segment_ids.size(); }

  // Re-serialization in the on-disk format; loading the result joins
  // identically to loading the original file.
  std::string to_csv(const AttributeSchema& schema) const {
    const Attribute* attr = schema.find(attribute);
    std::string out = "segment_id";
    for (const auto& c : attr->classes) out += "," + csv_escape(c);
    out += "\n";
    for (std::size_t i = 0; i < size(); ++i) {
      out += csv_escape(segment_ids[i]);
      for (double v : rows[i]) out += "," + format_double(v);
      out += "\n";
    }
    return out;
  }
};

// Ground-truth labels plus any extra categorical metadata columns. A cell
// holds a class name; an empty cell means the label is missing for that
// attribute and the segment is excluded from that attribute only.
struct LabelTable {
  std::vector<std::string> columns;  // header order, segment_id excluded
  std::vector<std::string> segment_ids;
  std::vector<std::vector<std::string>> cells;  // [row][column]
  std::string source_path;
  std::string digest;

  std::size_t size() const { return segment_ids.size(); }

  int column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::string to_csv() const {
    std::string out = "segment_id";
    for (const auto& c : columns) out += "," + csv_escape(c);
    out += "\n";
    for (std::size_t i = 0; i < size(); ++i) {
      out += csv_escape(segment_ids[i]);
      for (const auto& cell : cells[i]) out += "," + csv_escape(cell);
      out += "\n";
    }
    return out;
  }
};

struct JoinStats {
  std::size_t joined_rows = 0;
  std::size_t score_only = 0;     // scored segments with no usable label
  std::size_t label_only = 0;     // labeled segments with no score row
  std::size_t missing_label = 0;  // joined segments with an empty label cell
};

// The unit every metric operates on: one attribute's scores and integer
// class labels over the segments present on both sides, sorted by segment
// id so results do not depend on input row order.
struct JoinedAttribute {
  std::string attribute;
  int cardinality = 0;
  std::vector<std::string> segment_ids;       // ascending
  std::vector<int> labels;                    // class index per row
  std::vector<std::vector<double>> scores;    // N x K, schema class order
  JoinStats stats;

  std::size_t size() const { return segment_ids.size(); }

  // Classes that actually occur in the joined labels.
  std::vector<bool> present_classes() const {
    std::vector<bool> present(cardinality, false);
    for (int l : labels) present[l] = true;
    return present;
  }
};

// ---------------------------------------------------------------------------
// Loading

// Loads one per-attribute score file. The header must be
// `segment_id,<class_1>,...,<class_K>`; class columns may appear in any
// order and are mapped back to schema order by name. When `expected_attr`
// is empty the attribute is inferred from the header's class set.
inline ScoreTable load_score_table(const std::string& path,
                                   const AttributeSchema& schema,
                                   const std::string& expected_attr = "") {
  CsvTable csv = read_csv(path);
  if (csv.header.empty() || csv.header[0] != "segment_id")
    throw Error(errc::parse_failure, "first column must be 'segment_id'",
                path + ":1");

  std::vector<std::string> class_cols(csv.header.begin() + 1,
                                      csv.header.end());

  const Attribute* attr = nullptr;
  if (!expected_attr.empty()) {
    attr = schema.find(expected_attr);
    if (attr == nullptr)
      throw Error(errc::unknown_field,
                  "attribute '" + expected_attr + "' not in schema", path);
    if (static_cast<int>(class_cols.size()) != attr->cardinality())
      throw Error(errc::width_mismatch,
                  "score file has " + std::to_string(class_cols.size()) +
                      " class columns but attribute '" + attr->name +
                      "' declares " + std::to_string(attr->cardinality()),
                  path + ":1");
  } else {
    // Infer: the set of header classes must match exactly one attribute.
    for (const auto& a : schema.attributes()) {
      if (static_cast<int>(class_cols.size()) != a.cardinality()) continue;
      bool all = true;
      for (const auto& c : class_cols)
        if (a.class_index(c) < 0) { all = false; break; }
      if (all) {
        if (attr != nullptr)
          throw Error(errc::parse_failure,
                      "score header matches more than one attribute",
                      path + ":1");
        attr = &a;
      }
    }
    if (attr == nullptr)
      throw Error(errc::width_mismatch,
                  "score header matches no schema attribute", path + ":1");
  }

  // Column c of the file feeds schema class col_to_class[c].
  std::vector<int> col_to_class(class_cols.size());
  std::vector<bool> seen(attr->classes.size(), false);
  for (std::size_t c = 0; c < class_cols.size(); ++c) {
    int k = attr->class_index(class_cols[c]);
    if (k < 0)
      throw Error(errc::unknown_class,
                  "class '" + class_cols[c] + "' not declared for attribute '" +
                      attr->name + "'",
                  path + ":1");
    if (seen[k])
      throw Error(errc::duplicate_class,
                  "class '" + class_cols[c] + "' appears twice in header",
                  path + ":1");
    seen[k] = true;
    col_to_class[c] = k;
  }

  ScoreTable t;
  t.attribute = attr->name;
  t.cardinality = attr->cardinality();
  t.source_path = csv.path;
  t.digest = csv.digest;

  std::unordered_map<std::string, std::size_t> seen_ids;
  seen_ids.reserve(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    std::string where = path + ":" + std::to_string(csv.line[r]);
    if (row.size() != csv.header.size())
      throw Error(errc::width_mismatch,
                  "row has " + std::to_string(row.size() - 1) +
                      " score cells, expected " +
                      std::to_string(csv.header.size() - 1),
                  where);
    if (row[0].empty())
      throw Error(errc::parse_failure, "empty segment_id", where);
    if (!seen_ids.emplace(row[0], r).second)
      throw Error(errc::duplicate_segment,
                  "segment '" + row[0] + "' appears twice", where);

    std::vector<double> scores(attr->cardinality());
    for (std::size_t c = 1; c < row.size(); ++c)
      scores[col_to_class[c - 1]] = parse_score(row[c], where);
    t.segment_ids.push_back(row[0]);
    t.rows.push_back(std::move(scores));
  }
  return t;
}

// Loads the label file. Header: `segment_id,<col>,...`; columns whose name
// matches a schema attribute hold class names (validated), all others are
// free-form categorical metadata usable as grouping fields.
inline LabelTable load_label_table(const std::string& path,
                                   const AttributeSchema& schema) {
  CsvTable csv = read_csv(path);
  if (csv.header.empty() || csv.header[0] != "segment_id")
    throw Error(errc::parse_failure, "first column must be 'segment_id'",
                path + ":1");

  LabelTable t;
  t.columns.assign(csv.header.begin() + 1, csv.header.end());
  t.source_path = csv.path;
  t.digest = csv.digest;

  for (std::size_t i = 0; i < t.columns.size(); ++i)
    for (std::size_t j = i + 1; j < t.columns.size(); ++j)
      if (t.columns[i] == t.columns[j])
        throw Error(errc::parse_failure,
                    "column '" + t.columns[i] + "' appears twice in header",
                    path + ":1");

  std::unordered_map<std::string, std::size_t> seen_ids;
  seen_ids.reserve(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    std::string where = path + ":" + std::to_string(csv.line[r]);
    if (row.size() != csv.header.size())
      throw Error(errc::width_mismatch,
                  "row has " + std::to_string(row.size()) +
                      " cells, header declares " +
                      std::to_string(csv.header.size()),
                  where);
    if (row[0].empty())
      throw Error(errc::parse_failure, "empty segment_id", where);
    if (!seen_ids.emplace(row[0], r).second)
      throw Error(errc::duplicate_segment,
                  "segment '" + row[0] + "' appears twice", where);

    for (std::size_t c = 1; c < row.size(); ++c) {
      const Attribute* attr = schema.find(csv.header[c]);
      if (attr != nullptr && !row[c].empty() &&
          attr->class_index(row[c]) < 0)
        throw Error(errc::unknown_class,
                    "label '" + row[c] + "' is not a declared class of '" +
                        attr->name + "'",
                    where);
    }
    t.segment_ids.push_back(row[0]);
    t.cells.emplace_back(row.begin() + 1, row.end());
  }
  return t;
}

// ---------------------------------------------------------------------------
// Joining

// Joins one score table with the labels by exact segment-id match. Segments
// missing from either side, or with an empty label cell for this attribute,
// are excluded and counted. Output rows are sorted by segment id.
inline JoinedAttribute join_attribute(const ScoreTable& scores,
                                      const LabelTable& labels,
                                      const AttributeSchema& schema) {
  const Attribute* attr = schema.find(scores.attribute);
  if (attr == nullptr)
    throw Error(errc::unknown_field,
                "attribute '" + scores.attribute + "' not in schema");
  int label_col = labels.column_index(attr->name);
  if (label_col < 0)
    throw Error(errc::unknown_field,
                "label file has no column for attribute '" + attr->name + "'",
                labels.source_path);

  std::unordered_map<std::string_view, std::size_t> label_row;
  label_row.reserve(labels.size());
  for (std::size_t r = 0; r < labels.size(); ++r)
    label_row.emplace(labels.segment_ids[r], r);

  JoinedAttribute j;
  j.attribute = attr->name;
  j.cardinality = attr->cardinality();

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores.segment_ids[a] < scores.segment_ids[b];
  });

  std::size_t matched = 0;
  for (std::size_t i : order) {
    auto it = label_row.find(scores.segment_ids[i]);
    if (it == label_row.end()) {
      ++j.stats.score_only;
      continue;
    }
    ++matched;
    const std::string& cell = labels.cells[it->second][label_col];
    if (cell.empty()) {
      ++j.stats.missing_label;
      continue;
    }
    j.segment_ids.push_back(scores.segment_ids[i]);
    j.labels.push_back(attr->class_index(cell));
    j.scores.push_back(scores.rows[i]);
  }
  j.stats.joined_rows = j.segment_ids.size();
  j.stats.label_only = labels.size() - matched;

  if (j.stats.joined_rows == 0)
    throw Error(errc::zero_joined_rows,
                "no segment of attribute '" + attr->name +
                    "' appears in both scores and labels");
  return j;
}

// Everything the pipeline needs, loaded and joined.
struct Dataset {
  AttributeSchema schema;
  std::vector<ScoreTable> scores;      // schema attribute order
  LabelTable labels;
  std::vector<JoinedAttribute> joined; // schema attribute order
};

// Loads score files and the label file against a schema and joins them.
// `score_paths` are (attribute, path) pairs; pass an empty attribute name to
// infer it from the file header.
inline Dataset load_dataset(
    const AttributeSchema& schema,
    const std::vector<std::pair<std::string, std::string>>& score_paths,
    const std::string& label_path) {
  Dataset d;
  d.schema = schema;
  d.labels = load_label_table(label_path, schema);

  std::vector<ScoreTable> loaded;
  for (const auto& [attr, path] : score_paths)
    loaded.push_back(load_score_table(path, schema, attr));

  for (const auto& attr : schema.attributes()) {
    const ScoreTable* found = nullptr;
    for (const auto& t : loaded)
      if (t.attribute == attr.name) {
        if (found != nullptr)
          throw Error(errc::duplicate_attribute,
                      "two score files given for attribute '" + attr.name +
                          "'");
        found = &t;
      }
    if (found == nullptr)
      throw Error(errc::unknown_field,
                  "no score file given for attribute '" + attr.name + "'");
    d.scores.push_back(*found);
    d.joined.push_back(join_attribute(*found, d.labels, schema));
  }
  return d;
}

}  // namespace sbls
