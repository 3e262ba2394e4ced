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

#include "qals/bench/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "qals/baselines.hpp"
#include "qals/bridge.hpp"
#include "qals/npp.hpp"
#include "qals/qals.hpp"
#include "qals/text.hpp"
#include "qals/tsp.hpp"

namespace qals::bench {

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    stream};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

struct Problem {
  ProblemKind kind;
  std::string text;
  std::optional<NppInstance> npp;
  std::optional<TspInstance> tsp;
  Qubo qubo;
};

Problem load_problem(ProblemKind kind, const std::string& text) {
  std::istringstream in(text);
  switch (kind) {
    case ProblemKind::kNpp: {
      NppInstance inst = read_npp(in);
      Qubo q = npp_to_qubo(inst);
      return {kind, text, std::move(inst), std::nullopt, std::move(q)};
    }
    case ProblemKind::kTsp: {
      TspInstance inst = read_tsp(in);
      Qubo q = inst.size() >= 2 ? tsp_to_qubo(inst).qubo : Qubo(1);
      return {kind, text, std::nullopt, std::move(inst), std::move(q)};
    }
    case ProblemKind::kQubo:
      return {kind, text, std::nullopt, std::nullopt, read_qubo(in)};
  }
  throw ConfigError("unknown problem kind");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Topology make_topology(const std::string& spec, Index n) {
  if (spec == "complete") return complete_graph(static_cast<int>(n));
  if (spec == "ring") return cycle_graph(static_cast<int>(n));
  if (spec.rfind("chimera:", 0) == 0) {
    std::size_t used = 0;
    int m = 0;
    try {
      m = std::stoi(spec.substr(8), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != spec.size() - 8 || m < 1) {
      throw ConfigError("bad chimera size in '" + spec + "'");
    }
    return chimera_graph(m);
  }
  if (spec.rfind("file:", 0) == 0) {
    try {
      return load_topology_file(spec.substr(5));
    } catch (const ParseError& e) {
      throw ConfigError(spec.substr(5) + ": " + e.what());
    }
  }
  throw ConfigError("unknown topology '" + spec + "'");
}

std::unique_ptr<Sampler> make_sampler(const SolverSpec& s,
                                      std::shared_ptr<const Topology> topology,
                                      std::uint64_t seed) {
  switch (s.backend.kind) {
    case BackendSpec::Kind::kExhaustive:
      return std::make_unique<ExhaustiveSampler>(s.exhaustive_cap);
    case BackendSpec::Kind::kSa:
      return std::make_unique<SaSampler>(std::move(topology), s.sa, seed);
    case BackendSpec::Kind::kRandom:
      return std::make_unique<RandomSampler>(seed);
    case BackendSpec::Kind::kBridge:
      return std::make_unique<BridgeSampler>(s.backend.command);
  }
  throw ConfigError("unknown backend");
}

std::string solver_label(const SolverSpec& s) {
  if (s.name == "qals" || s.name == "sample") return s.name + "/" + s.backend.label();
  return s.name;
}

std::string trace_path(const std::string& base, int run, int repetitions) {
  if (repetitions == 1) return base;
  const std::filesystem::path p(base);
  auto name = p.stem().string() + ".run" + std::to_string(run) + p.extension().string();
  return (p.parent_path() / name).string();
}

Bits assignment_bits(const Assignment& a, Index n) {
  Bits x = Bits::Zero(n);
  for (const auto& [node, bit] : a) x[node] = bit;
  return x;
}

struct RunContext {
  const RunConfig& config;
  const Problem& problem;
  std::shared_ptr<const Topology> topology;  // qals only
};

RunRecord execute_run(const RunContext& ctx, int run) {
  const auto& cfg = ctx.config;
  const auto& s = cfg.solver;
  const auto& prob = ctx.problem;
  RunRecord rec;
  rec.run = run;
  rec.seed = cfg.seed + static_cast<std::uint64_t>(run);
  Rng rng(derive_seed(rec.seed, 0));
  const std::uint64_t sampler_seed = derive_seed(rec.seed, 1);

  std::optional<Bits> bits;
  std::optional<Tour> tour;
  std::optional<QalsTrace> trace;
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  try {
    if (s.name == "qals") {
      auto sampler = make_sampler(s, ctx.topology, sampler_seed);
      try {
        QalsResult r = run_qals(prob.qubo, *ctx.topology, *sampler, s.qals, rng);
        bits = std::move(r.solution);
        rec.iterations = r.trace.iterations.size();
        trace = std::move(r.trace);
      } catch (const QalsAborted& e) {
        trace = e.trace();
        rec.iterations = e.trace().iterations.size();
        throw;
      }
    } else if (s.name == "sa") {
      bits = anneal_qubo(prob.qubo, s.sa, s.reads, sampler_seed).x;
    } else if (s.name == "sample") {
      auto sampler = make_sampler(s, nullptr, sampler_seed);
      const SampleResult r = sampler->sample({qubo_weights(prob.qubo), s.reads});
      bits = assignment_bits(r.assignment, prob.qubo.size());
    } else if (s.name == "exhaustive" || (s.name == "brute" && prob.kind != ProblemKind::kTsp)) {
      bits = brute_force(prob.qubo, s.exhaustive_cap).x;
    } else if (s.name == "brute") {
      tour = tsp_brute_force(*prob.tsp, s.tour_cap).tour;
    } else if (s.name == "ckk") {
      const CkkResult r = ckk_solve(*prob.npp);
      bits = r.partition;
      rec.iterations = r.nodes;
    } else if (s.name == "greedy") {
      bits = greedy_partition(*prob.npp);
    } else if (s.name == "tabu") {
      bits = tabu_search(prob.qubo, s.tabu, rng).x;
    } else if (s.name == "race") {
      bits = race_solve(prob.qubo, s.tabu, s.sa, s.reads, sampler_seed).best.x;
    }
  } catch (const Error& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  rec.time_s = std::chrono::duration<double>(clock::now() - start).count();

  if (trace && !cfg.trace.empty()) {
    std::ofstream out(trace_path(cfg.trace, run, cfg.repetitions));
    if (!out) {
      rec.failed = true;
      rec.error = "cannot write trace file";
    }
    write_trace_jsonl(out, *trace);
  }
  if (rec.failed) return rec;

  if (bits) {
    rec.solution = format_bits(*bits);
    rec.energy = evaluate(prob.qubo, *bits);
  }
  switch (prob.kind) {
    case ProblemKind::kNpp:
      rec.objective = static_cast<double>(npp_diff(*prob.npp, *bits));
      rec.valid = true;
      break;
    case ProblemKind::kQubo:
      rec.objective = rec.energy;
      rec.valid = true;
      break;
    case ProblemKind::kTsp:
      if (!tour) tour = refine_tsp_solution(*bits, prob.tsp->size(), rng);
      rec.tour = format_tour(*tour);
      try {
        rec.objective = tsp_cost(*prob.tsp, *tour);
        rec.valid = true;
      } catch (const Error& e) {
        rec.error = e.what();
      }
      break;
  }
  return rec;
}

}  // namespace

std::string generate_instance(ProblemKind kind, int size, double range, std::uint64_t seed) {
  if (size < 1) throw ConfigError("size must be positive");
  Rng rng(seed);
  std::ostringstream out;
  switch (kind) {
    case ProblemKind::kNpp: {
      if (range < 1 || range != std::floor(range)) {
        throw ConfigError("npp range must be a positive integer");
      }
      std::uniform_int_distribution<std::int64_t> draw(1, static_cast<std::int64_t>(range));
      std::vector<std::int64_t> numbers(static_cast<std::size_t>(size));
      for (auto& v : numbers) v = draw(rng);
      write_npp(out, NppInstance(std::move(numbers)));
      break;
    }
    case ProblemKind::kTsp: {
      if (!(range >= 0) || !std::isfinite(range)) throw ConfigError("tsp range must be finite");
      std::uniform_real_distribution<double> draw(0.0, range);
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size, size);
      for (int i = 0; i < size; ++i) {
        for (int j = i + 1; j < size; ++j) d(i, j) = d(j, i) = draw(rng);
      }
      write_tsp(out, TspInstance(std::move(d)));
      break;
    }
    case ProblemKind::kQubo:
      throw ConfigError("only npp and tsp instances can be generated");
  }
  return out.str();
}

void cmd_gen(ProblemKind kind, int size, double range, std::uint64_t seed,
             const std::string& out_path) {
  const std::string text = generate_instance(kind, size, range, seed);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + out_path);
  out << text;
  out.close();
  if (!out) throw ConfigError("failed writing " + out_path);
}

Report cmd_solve(const RunConfig& config) {
  const auto& ps = config.problem;
  Report report;
  auto& h = report.header;
  if (!ps.file.empty()) {
    h.instance = ps.file;
    h.instance_text = read_text(ps.file);
  } else {
    std::ostringstream id;
    id << to_string(ps.kind) << "-n" << ps.size << "-r" << format_real(*ps.range) << "-s"
       << ps.seed;
    h.instance = id.str();
    h.instance_text = generate_instance(ps.kind, ps.size, *ps.range, ps.seed);
  }
  Problem problem = [&] {
    try {
      return load_problem(ps.kind, h.instance_text);
    } catch (const ParseError& e) {
      throw ConfigError(h.instance + ": " + e.what());
    }
  }();
  h.kind = ps.kind;
  h.dimension = ps.kind == ProblemKind::kTsp ? static_cast<long>(problem.tsp->size())
                                             : static_cast<long>(problem.qubo.size());
  h.range = ps.range;
  h.solver = solver_label(config.solver);
  h.seed = config.seed;

  if (ps.kind == ProblemKind::kTsp && problem.tsp->size() < 2 && config.solver.name != "brute") {
    throw ConfigError("TSP QUBO needs at least two cities");
  }
  if (!config.trace.empty() && config.solver.name != "qals") {
    throw ConfigError("trace export is only available for the qals solver");
  }
  RunContext ctx{config, problem, nullptr};
  if (config.solver.name == "qals") {
    auto topology =
        std::make_shared<const Topology>(make_topology(config.solver.topology, problem.qubo.size()));
    if (static_cast<Index>(topology->node_count()) < problem.qubo.size()) {
      throw ConfigError("topology has " + std::to_string(topology->node_count()) +
                        " nodes, problem needs " + std::to_string(problem.qubo.size()));
    }
    ctx.topology = std::move(topology);
  }

  report.runs.resize(static_cast<std::size_t>(config.repetitions));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < config.repetitions; r = next++) {
      report.runs[static_cast<std::size_t>(r)] = execute_run(ctx, r);
    }
  };
  const int jobs = std::min(config.jobs, config.repetitions);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!config.jsonl.empty()) {
    std::ofstream out(config.jsonl);
    if (!out) throw ConfigError("cannot write " + config.jsonl);
    write_report_jsonl(out, report);
  }
  if (!config.csv.empty()) {
    std::ofstream out(config.csv);
    if (!out) throw ConfigError("cannot write " + config.csv);
    write_runs_csv(out, report);
  }
  return report;
}

std::vector<TableRow> cmd_report(const std::vector<std::string>& inputs, std::ostream& table,
                                 const std::string& csv_path) {
  if (inputs.empty()) throw ConfigError("report needs at least one input");
  std::vector<Report> reports;
  for (const auto& path : inputs) reports.push_back(read_report_file(path));
  auto rows = merge_reports(reports);
  write_table_text(table, rows);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw ConfigError("cannot write " + csv_path);
    write_table_csv(out, rows);
  }
  return rows;
}

std::vector<std::string> verify_report(const Report& report) {
  std::vector<std::string> problems;
  const auto& h = report.header;
  Problem prob = [&] {
    try {
      return load_problem(h.kind, h.instance_text);
    } catch (const Error& e) {
      throw ReportError(std::string("inline instance does not parse: ") + e.what());
    }
  }();
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  for (const auto& r : report.runs) {
    const std::string tag = "run " + std::to_string(r.run) + ": ";
    if (r.failed) continue;
    std::optional<Bits> bits;
    if (!r.solution.empty()) {
      try {
        bits = parse_bits(r.solution);
      } catch (const Error&) {
        problems.push_back(tag + "solution is not a bit string");
        continue;
      }
      if (bits->size() != prob.qubo.size()) {
        problems.push_back(tag + "solution has the wrong length");
        continue;
      }
      if (!r.energy || !close(*r.energy, evaluate(prob.qubo, *bits))) {
        problems.push_back(tag + "energy does not match the solution");
      }
    }
    switch (h.kind) {
      case ProblemKind::kNpp: {
        if (!bits) {
          problems.push_back(tag + "missing partition");
          break;
        }
        const std::int64_t diff = npp_diff(*prob.npp, *bits);
        if (!r.objective || *r.objective != static_cast<double>(diff)) {
          problems.push_back(tag + "sets difference should be " + std::to_string(diff));
        }
        break;
      }
      case ProblemKind::kQubo:
        if (!bits || !r.objective || !close(*r.objective, evaluate(prob.qubo, *bits))) {
          problems.push_back(tag + "objective does not match the solution energy");
        }
        break;
      case ProblemKind::kTsp: {
        Tour tour;
        std::istringstream in(r.tour);
        for (Index c; in >> c;) tour.push_back(c);
        if (!in.eof() || !is_valid_tour(tour, prob.tsp->size())) {
          problems.push_back(tag + "tour is not a permutation of the cities");
          break;
        }
        if (!r.valid) break;
        try {
          const double cost = tsp_cost(*prob.tsp, tour);
          if (!r.objective || !close(*r.objective, cost)) {
            problems.push_back(tag + "tour length should be " + format_real(cost));
          }
        } catch (const Error& e) {
          problems.push_back(tag + e.what());
        }
        break;
      }
    }
  }
  if (report.stored_summary) {
    const Summary expect = summarize(report.runs);
    const Summary& got = *report.stored_summary;
    auto same = [&](const std::optional<double>& a, const std::optional<double>& b) {
      return a.has_value() == b.has_value() && (!a || close(*a, *b));
    };
    if (got.runs != expect.runs || got.failed != expect.failed || got.counted != expect.counted ||
        !same(got.mu, expect.mu) || !same(got.sigma, expect.sigma) ||
        !close(got.mean_time_s, expect.mean_time_s)) {
      problems.push_back("aggregate record does not match the run records");
    }
  } else {
    problems.push_back("aggregate record missing");
  }
  return problems;
}

std::vector<std::string> cmd_verify(const std::string& path) {
  return verify_report(read_report_file(path));
}

}  // namespace qals::bench
