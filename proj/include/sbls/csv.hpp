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
#include <string>
#include <string_view>
#include <vector>

#include "sbls/digest.hpp"
#include "sbls/error.hpp"

namespace sbls {

// One parsed CSV file. `line` holds the 1-based physical line of each row,
// used to point error messages at the offending input.
struct CsvTable {
  std::string path;
  std::string digest;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line;
};

namespace detail {

// Splits one line into cells. Double-quoted cells may contain commas and
// escaped quotes (""); embedded newlines are not supported.
inline std::vector<std::string> split_csv_line(std::string_view s,
                                               const std::string& where) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  std::size_t i = 0;
  const std::size_t n = s.size();
  for (;;) {
    if (quoted) {
      if (i >= n)
        throw Error(errc::parse_failure, "unterminated quoted cell", where);
      if (s[i] == '"') {
        if (i + 1 < n && s[i + 1] == '"') {
          cell += '"';
          i += 2;
        } else {
          quoted = false;
          ++i;
        }
      } else {
        cell += s[i++];
      }
    } else if (i >= n || s[i] == ',') {
      out.push_back(cell);
      cell.clear();
      if (i >= n) break;
      ++i;
    } else if (s[i] == '"' && cell.empty()) {
      quoted = true;
      ++i;
    } else {
      cell += s[i++];
    }
  }
  return out;
}

}  // namespace detail

// Reads a whole CSV file: UTF-8, optional BOM, LF or CRLF line endings,
// first line is the header. Trailing blank lines are ignored.
inline CsvTable read_csv(const std::string& path) {
  std::string data = read_file(path);
  CsvTable t;
  t.path = path;
  t.digest = digest_hex(fnv1a64(data));

  std::string_view rest(data);
  if (rest.substr(0, 3) == "\xef\xbb\xbf") rest.remove_prefix(3);

  std::size_t line_no = 0;
  while (!rest.empty()) {
    std::size_t eol = rest.find('\n');
    std::string_view line =
        (eol == std::string_view::npos) ? rest : rest.substr(0, eol);
    rest = (eol == std::string_view::npos) ? std::string_view{}
                                           : rest.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() && rest.empty()) break;

    std::string where = path + ":" + std::to_string(line_no);
    auto cells = detail::split_csv_line(line, where);
    if (line_no == 1) {
      t.header = std::move(cells);
    } else {
      t.rows.push_back(std::move(cells));
      t.line.push_back(line_no);
    }
  }
  if (t.header.empty())
    throw Error(errc::parse_failure, "empty file or missing header", path);
  return t;
}

// Parses a finite double. Accepts scientific notation, '.' decimal
// separator only; rejects trailing junk, inf and nan.
inline double parse_score(std::string_view cell, const std::string& where) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw Error(errc::parse_failure,
                "not a number: '" + std::string(cell) + "'", where);
  if (!std::isfinite(v))
    throw Error(errc::non_finite_score,
                "non-finite score: '" + std::string(cell) + "'", where);
  return v;
}

// Shortest round-trip decimal form; keeps emitted files byte-stable and
// re-parsing lossless.
inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

inline std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace sbls
