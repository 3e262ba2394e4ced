// Copyright 2026 The QALS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small helpers shared by the line-oriented text formats.

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace qals {

// Yields non-blank lines, skipping '#' comments, tracking 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line);
  std::size_t line_number() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::vector<std::string_view> split_fields(std::string_view line);
long parse_integer(std::string_view field, std::size_t line);
double parse_real(std::string_view field, std::size_t line);

// Shortest decimal text that reads back to exactly the same double.
std::string format_real(double value);

}  // namespace qals
