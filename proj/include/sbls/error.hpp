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

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbls {

// Every failure the library can diagnose. Validation is total: malformed
// input always surfaces as one of these, never as a partially built table.
enum class errc {
  parse_failure,
  io_failure,
  duplicate_attribute,
  duplicate_class,
  degenerate_attribute,
  duplicate_segment,
  width_mismatch,
  unknown_class,
  unknown_field,
  non_finite_score,
  zero_joined_rows,
  all_one_class,
  no_rows,
  empty_attribute_set,
  empty_matrix,
  no_valid_subgroup,
  no_scoreable_attribute,
  weight_sum_violation,
  invalid_spec,
  version_mismatch,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::parse_failure: return "ParseFailure";
    case errc::io_failure: return "IoFailure";
    case errc::duplicate_attribute: return "DuplicateAttribute";
    case errc::duplicate_class: return "DuplicateClass";
    case errc::degenerate_attribute: return "DegenerateAttribute";
    case errc::duplicate_segment: return "DuplicateSegment";
    case errc::width_mismatch: return "WidthMismatch";
    case errc::unknown_class: return "UnknownClass";
    case errc::unknown_field: return "UnknownField";
    case errc::non_finite_score: return "NonFiniteScore";
    case errc::zero_joined_rows: return "ZeroJoinedRows";
    case errc::all_one_class: return "AllOneClass";
    case errc::no_rows: return "NoRows";
    case errc::empty_attribute_set: return "EmptyAttributeSet";
    case errc::empty_matrix: return "EmptyMatrix";
    case errc::no_valid_subgroup: return "NoValidSubgroup";
    case errc::no_scoreable_attribute: return "NoScoreableAttribute";
    case errc::weight_sum_violation: return "WeightSumViolation";
    case errc::invalid_spec: return "InvalidSpec";
    case errc::version_mismatch: return "VersionMismatch";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  // `where` is a file location ("path:line") when the failure came from
  // parsing an on-disk table.
  Error(errc code, std::string message, std::string where)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message +
                           " (" + where + ")"),
        code_(code),
        where_(std::move(where)) {}

  errc code() const { return code_; }
  const std::string& where() const { return where_; }

 private:
  errc code_;
  std::string where_;
};

}  // namespace sbls
