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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qals/bench/config.hpp"

namespace qals::bench {

inline constexpr const char* kReportSchema = "qals-report/1";

// Describes the instance and solver a report was produced for. The instance
// itself travels inline so a report can be verified on its own.
struct ReportHeader {
  std::string schema = kReportSchema;
  std::string instance;
  ProblemKind kind = ProblemKind::kNpp;
  long dimension = 0;
  std::optional<double> range;
  std::string solver;  // solver name plus backend where relevant, e.g. "qals/sa"
  std::uint64_t seed = 0;
  std::string instance_text;
};

struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  bool valid = false;
  // Sets difference (npp), tour length (tsp) or QUBO energy (qubo).
  std::optional<double> objective;
  std::optional<double> energy;  // QUBO energy of `solution`
  double time_s = 0.0;
  std::size_t iterations = 0;
  std::string solution;  // bit string, empty when the solver has none
  std::string tour;      // space-separated cities (tsp)
  std::string error;
};

struct Summary {
  std::size_t runs = 0;
  std::size_t failed = 0;
  std::size_t counted = 0;  // runs contributing to mu and sigma
  std::optional<double> mu;
  std::optional<double> sigma;  // sample standard deviation, 0 for one value
  double mean_time_s = 0.0;
};

Summary summarize(const std::vector<RunRecord>& runs);

struct Report {
  ReportHeader header;
  std::vector<RunRecord> runs;
  // Aggregate line as read from a file; recomputed when writing.
  std::optional<Summary> stored_summary;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

// Lines: one header object, one object per run, one aggregate object.
void write_report_jsonl(std::ostream& out, const Report& report);
Report read_report_jsonl(std::istream& in);
Report read_report_file(const std::string& path);
void write_runs_csv(std::ostream& out, const Report& report);

// One row per (kind, dimension, range, solver), in order of first appearance.
struct TableRow {
  ProblemKind kind;
  long dimension;
  std::optional<double> range;
  std::string solver;
  Summary summary;
};

std::vector<TableRow> merge_reports(const std::vector<Report>& reports);
void write_table_text(std::ostream& out, const std::vector<TableRow>& rows);
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace qals::bench
