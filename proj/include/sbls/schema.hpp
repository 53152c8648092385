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
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "sbls/digest.hpp"
#include "sbls/error.hpp"

namespace sbls {

struct Attribute {
  std::string name;
  std::vector<std::string> classes;  // declared order is preserved

  int cardinality() const { return static_cast<int>(classes.size()); }

  // Index of a class name, or -1.
  int class_index(std::string_view cls) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == cls) return static_cast<int>(i);
    return -1;
  }
};

// The declared attribute set. Ordering of attributes and of classes within
// an attribute is exactly as declared; every score/label table is validated
// against it. Immutable after construction and safe to share across threads.
class AttributeSchema {
 public:
  static AttributeSchema from_attributes(std::vector<Attribute> attrs,
                                         std::string source = "") {
    AttributeSchema s;
    s.attributes_ = std::move(attrs);
    s.source_path_ = std::move(source);
    s.validate();
    return s;
  }

  static AttributeSchema from_json(const nlohmann::json& j,
                                   const std::string& source = "") {
    if (!j.is_object() || !j.contains("attributes") ||
        !j["attributes"].is_array())
      throw Error(errc::parse_failure,
                  "schema must be an object with an \"attributes\" array",
                  source);
    std::vector<Attribute> attrs;
    for (const auto& a : j["attributes"]) {
      if (!a.is_object() || !a.contains("name") || !a.contains("classes") ||
          !a["name"].is_string() || !a["classes"].is_array())
        throw Error(errc::parse_failure,
                    "each attribute needs a \"name\" and a \"classes\" array",
                    source);
      Attribute attr;
      attr.name = a["name"].get<std::string>();
      for (const auto& c : a["classes"]) {
        if (!c.is_string())
          throw Error(errc::parse_failure,
                      "class names must be strings (attribute '" + attr.name +
                          "')",
                      source);
        attr.classes.push_back(c.get<std::string>());
      }
      attrs.push_back(std::move(attr));
    }
    return from_attributes(std::move(attrs), source);
  }

  nlohmann::json to_json() const {
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& a : attributes_)
      attrs.push_back({{"name", a.name}, {"classes", a.classes}});
    return nlohmann::json{{"attributes", attrs}};
  }

  const std::vector<Attribute>& attributes() const { return attributes_; }
  std::size_t size() const { return attributes_.size(); }
  const Attribute& at(std::size_t i) const { return attributes_[i]; }

  int attribute_index(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
      if (attributes_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  const Attribute* find(std::string_view name) const {
    int i = attribute_index(name);
    return i < 0 ? nullptr : &attributes_[i];
  }

  const std::string& source_path() const { return source_path_; }
  const std::string& digest() const { return digest_; }
  void set_provenance(std::string path, std::string digest) {
    source_path_ = std::move(path);
    digest_ = std::move(digest);
  }

 private:
  void validate() const {
    if (attributes_.empty())
      throw Error(errc::empty_attribute_set, "schema declares no attributes",
                  source_path_);
    std::unordered_set<std::string> names;
    for (const auto& a : attributes_) {
      if (!names.insert(a.name).second)
        throw Error(errc::duplicate_attribute,
                    "attribute '" + a.name + "' declared twice", source_path_);
      if (a.classes.size() < 2)
        throw Error(errc::degenerate_attribute,
                    "attribute '" + a.name +
                        "' has fewer than 2 classes and cannot be scored",
                    source_path_);
      std::unordered_set<std::string> classes;
      for (const auto& c : a.classes)
        if (!classes.insert(c).second)
          throw Error(errc::duplicate_class,
                      "class '" + c + "' declared twice under attribute '" +
                          a.name + "'",
                      source_path_);
    }
  }

  std::vector<Attribute> attributes_;
  std::string source_path_;
  std::string digest_;
};

// Loads and validates a schema file:
//   {"attributes": [{"name": "...", "classes": ["...", ...]}, ...]}
inline AttributeSchema load_schema(const std::string& path) {
  std::string data = read_file(path);
  nlohmann::json j = nlohmann::json::parse(data, nullptr, false, true);
  if (j.is_discarded())
    throw Error(errc::parse_failure, "invalid JSON", path);
  AttributeSchema s = AttributeSchema::from_json(j, path);
  s.set_provenance(path, digest_hex(fnv1a64(data)));
  return s;
}

}  // namespace sbls
