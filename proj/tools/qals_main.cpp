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

// qals: instance generation, solver runs, report tables and verification.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qals/bench/commands.hpp"

namespace {

using namespace qals::bench;

int run_solve(const std::string& config_path, const KeyValues& overrides) {
  KeyValues kv = KeyValues::load(config_path);
  for (const char* key : {"run.seed", "output.trace", "solver.backend", "run.jobs"}) {
    if (auto v = overrides.get(key)) kv.set(key, *v);
  }
  const RunConfig config = parse_run_config(kv);
  const Report report = cmd_solve(config);
  write_table_text(std::cout, merge_reports({report}));
  int failed = 0;
  for (const auto& r : report.runs) {
    if (r.failed) {
      ++failed;
      std::cerr << "run " << r.run << " failed: " << r.error << '\n';
    }
  }
  return failed ? kExitSolver : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Annealing Learning Search toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Write a seeded npp or tsp instance");
  std::string kind;
  int size = 0;
  double range = 0;
  std::uint64_t gen_seed = 0;
  std::string out;
  gen->add_option("--kind", kind, "npp or tsp")->required();
  gen->add_option("--size", size, "Number of integers or cities")->required();
  gen->add_option("--range", range, "Upper bound of the drawn values")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--out,-o", out, "Instance file to write")->required();

  auto* solve = app.add_subcommand("solve", "Run the solver described by a config file");
  std::string config_path;
  KeyValues overrides;
  solve->add_option("config", config_path, "Run configuration")->required();
  solve->add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t v) { overrides.set("run.seed", std::to_string(v)); },
      "Base seed; run r uses seed + r");
  solve->add_option_function<std::string>(
      "--trace", [&](const std::string& v) { overrides.set("output.trace", v); },
      "Per-iteration QALS trace (JSON lines)");
  solve->add_option_function<std::string>(
      "--backend", [&](const std::string& v) { overrides.set("solver.backend", v); },
      "exhaustive | sa | random | bridge:<command>");
  solve->add_option_function<int>(
      "--jobs", [&](int v) { overrides.set("run.jobs", std::to_string(v)); },
      "Parallel workers");

  auto* report = app.add_subcommand("report", "Merge reports into a comparison table");
  std::vector<std::string> inputs;
  std::string csv;
  report->add_option("reports", inputs, "JSON-lines reports")->required();
  report->add_option("--csv", csv, "Also write the table as CSV");

  auto* verify = app.add_subcommand("verify", "Re-check every run of a report");
  std::string verify_path;
  verify->add_option("report", verify_path, "JSON-lines report")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen) {
      cmd_gen(parse_problem_kind(kind), size, range, gen_seed, out);
      return kExitOk;
    }
    if (*solve) return run_solve(config_path, overrides);
    if (*report) {
      cmd_report(inputs, std::cout, csv);
      return kExitOk;
    }
    if (*verify) {
      const auto problems = cmd_verify(verify_path);
      for (const auto& p : problems) std::cerr << p << '\n';
      if (!problems.empty()) return kExitVerify;
      std::cout << "ok\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ReportError& e) {
    std::cerr << "report error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qals::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}
