// Copyright 2026 The Peloton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal RFC-4180 reader/writer for the season file formats.

#ifndef PELOTON_CSV_HPP
#define PELOTON_CSV_HPP

#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace peloton::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Column index by (case-sensitive) name.
  std::optional<std::size_t> column(std::string_view name) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses a whole stream. The first record is the header. Blank lines are
/// skipped; a UTF-8 byte-order mark is dropped.
Table parse(std::istream& in);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

/// Fixed notation with `decimals` digits; negative zero prints as zero.
std::string fixed(double value, int decimals = 6);

/// Shortest text that parses back to the same double.
std::string shortest(double value);

/// Strict decimal parse: whole field must be a finite number.
std::optional<double> parse_number(std::string_view text);

}  // namespace peloton::csv

#endif  // PELOTON_CSV_HPP
