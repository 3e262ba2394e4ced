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
#include "qals/bench/report.hpp"

namespace qals::bench {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitVerify = 4,
};

/// Seeded instance text: npp draws `size` integers uniform in [1, range];
/// tsp draws a symmetric matrix with zero diagonal and reals uniform in
/// [0, range].
std::string generate_instance(ProblemKind kind, int size, double range, std::uint64_t seed);
void cmd_gen(ProblemKind kind, int size, double range, std::uint64_t seed,
             const std::string& out_path);

/// Runs the configured solver `repetitions` times (run r uses seed + r) and
/// writes the JSONL and CSV outputs named in the config. Solver failures are
/// recorded on the run rather than thrown.
Report cmd_solve(const RunConfig& config);

/// Merged comparison table of one or more reports.
std::vector<TableRow> cmd_report(const std::vector<std::string>& inputs, std::ostream& table,
                                 const std::string& csv_path = {});

/// Re-checks every successful run against the inline instance. Returns one
/// message per discrepancy.
std::vector<std::string> verify_report(const Report& report);
std::vector<std::string> cmd_verify(const std::string& path);

}  // namespace qals::bench
