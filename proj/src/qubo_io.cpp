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

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "qals/qubo.hpp"
#include "qals/text.hpp"

namespace qals {

Qubo read_qubo(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(reader.line_number(), "missing order line");
  const auto header = split_fields(line);
  if (header.size() != 1) throw ParseError(reader.line_number(), "expected a single order value");
  const long n = parse_integer(header[0], reader.line_number());
  if (n < 1) throw ParseError(reader.line_number(), "order must be positive");
  Qubo q(n);
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 3) throw ParseError(reader.line_number(), "expected 'i j value'");
    const long i = parse_integer(fields[0], reader.line_number());
    const long j = parse_integer(fields[1], reader.line_number());
    const double v = parse_real(fields[2], reader.line_number());
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw ParseError(reader.line_number(), "index out of range");
    }
    if (i > j) throw ParseError(reader.line_number(), "entry below the diagonal");
    if (!std::isfinite(v)) throw ParseError(reader.line_number(), "non-finite value");
    q.add(i, j, v);
  }
  return q;
}

void write_qubo(std::ostream& out, const Qubo& q) {
  out << q.size() << '\n';
  const auto& c = q.coeffs();
  for (Index i = 0; i < q.size(); ++i) {
    for (Index j = i; j < q.size(); ++j) {
      if (c(i, j) != 0.0) out << i << ' ' << j << ' ' << format_real(c(i, j)) << '\n';
    }
  }
}

std::string format_bits(const Bits& x) {
  std::string s(static_cast<std::size_t>(x.size()), '0');
  for (Index i = 0; i < x.size(); ++i) s[i] = x[i] ? '1' : '0';
  return s;
}

Bits parse_bits(const std::string& text) {
  Bits x(static_cast<Index>(text.size()));
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') throw Error("bit string contains '" + std::string(1, text[i]) + "'");
    x[static_cast<Index>(i)] = text[i] == '1';
  }
  return x;
}

}  // namespace qals
