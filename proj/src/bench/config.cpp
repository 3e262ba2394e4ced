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

#include "qals/bench/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "qals/text.hpp"
#include "qals/tsp.hpp"

namespace qals::bench {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

const std::set<std::string> kSolvers = {"qals", "sa",    "sample", "exhaustive", "brute",
                                        "ckk",  "greedy", "tabu",  "race"};

}  // namespace

KeyValues KeyValues::parse(std::istream& in) {
  KeyValues kv;
  LineReader reader(in);
  std::string line;
  std::string section;
  while (reader.next(line)) {
    const std::string text = trim(line);
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3) {
        throw ParseError(reader.line_number(), "malformed section header");
      }
      section = trim(std::string_view(text).substr(1, text.size() - 2)) + ".";
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(reader.line_number(), "expected key = value");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw ParseError(reader.line_number(), "empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!kv.values_.emplace(section + key, value).second) {
      throw ParseError(reader.line_number(), "duplicate key " + section + key);
    }
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  used_.insert(key);
  return it->second;
}

std::string KeyValues::get(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

long KeyValues::get(const std::string& key, long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ConfigError(key + ": not an integer: '" + *v + "'");
  }
  return out;
}

double KeyValues::get(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    return parse_real(*v, 0);
  } catch (const ParseError&) {
    throw ConfigError(key + ": not a number: '" + *v + "'");
  }
}

bool KeyValues::get(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true") return true;
  if (*v == "false") return false;
  throw ConfigError(key + ": expected true or false");
}

void KeyValues::reject_unused() const {
  for (const auto& [key, value] : values_) {
    if (!used_.count(key)) throw ConfigError("unknown config key " + key);
  }
}

ProblemKind parse_problem_kind(const std::string& text) {
  if (text == "npp") return ProblemKind::kNpp;
  if (text == "tsp") return ProblemKind::kTsp;
  if (text == "qubo") return ProblemKind::kQubo;
  throw ConfigError("unknown problem kind '" + text + "'");
}

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kNpp: return "npp";
    case ProblemKind::kTsp: return "tsp";
    case ProblemKind::kQubo: return "qubo";
  }
  return "?";
}

BackendSpec BackendSpec::parse(const std::string& text) {
  BackendSpec b;
  if (text == "exhaustive") {
    b.kind = Kind::kExhaustive;
  } else if (text == "sa") {
    b.kind = Kind::kSa;
  } else if (text == "random") {
    b.kind = Kind::kRandom;
  } else if (text.rfind("bridge:", 0) == 0 && text.size() > 7) {
    b.kind = Kind::kBridge;
    b.command = text.substr(7);
  } else {
    throw ConfigError("unknown backend '" + text + "'");
  }
  return b;
}

std::string BackendSpec::label() const {
  switch (kind) {
    case Kind::kExhaustive: return "exhaustive";
    case Kind::kSa: return "sa";
    case Kind::kRandom: return "random";
    case Kind::kBridge: return "bridge";
  }
  return "?";
}

RunConfig parse_run_config(const KeyValues& kv) {
  RunConfig c;
  auto& p = c.problem;
  p.kind = parse_problem_kind(kv.get("problem.kind", std::string("npp")));
  p.file = kv.get("problem.file", std::string());
  p.size = static_cast<int>(kv.get("problem.size", 0L));
  if (kv.has("problem.range")) p.range = kv.get("problem.range", 0.0);
  p.seed = static_cast<std::uint64_t>(kv.get("problem.seed", 0L));
  if (!p.file.empty()) {
    if (!std::filesystem::exists(p.file)) throw ConfigError("instance file not found: " + p.file);
  } else {
    if (p.kind == ProblemKind::kQubo) throw ConfigError("qubo problems need problem.file");
    if (p.size < 1) throw ConfigError("problem.size must be positive");
    if (!p.range) throw ConfigError("problem.range is required when generating");
  }

  auto& s = c.solver;
  s.name = kv.get("solver.name", s.name);
  if (!kSolvers.count(s.name)) throw ConfigError("unknown solver '" + s.name + "'");
  if ((s.name == "ckk" || s.name == "greedy") && p.kind != ProblemKind::kNpp) {
    throw ConfigError(s.name + " only solves npp problems");
  }
  s.backend = BackendSpec::parse(kv.get("solver.backend", std::string("sa")));
  s.topology = kv.get("solver.topology", s.topology);
  s.reads = static_cast<int>(kv.get("solver.reads", static_cast<long>(s.reads)));
  s.exhaustive_cap = static_cast<int>(kv.get("solver.cap", static_cast<long>(s.exhaustive_cap)));
  s.tour_cap = static_cast<int>(kv.get("solver.tour_cap", static_cast<long>(kDefaultTourCap)));
  if (s.reads < 1) throw ConfigError("solver.reads must be at least 1");

  s.qals = p.kind == ProblemKind::kTsp ? QalsParams::tsp_defaults(0) : QalsParams::npp_defaults(0);
  s.qals.i_max.reset();
  if (kv.has("qals.i_max")) s.qals.i_max = static_cast<int>(kv.get("qals.i_max", 0L));
  s.qals.p_delta = kv.get("qals.p_delta", s.qals.p_delta);
  s.qals.eta = kv.get("qals.eta", s.qals.eta);
  s.qals.q = kv.get("qals.q", s.qals.q);
  s.qals.N = static_cast<int>(kv.get("qals.N", static_cast<long>(s.qals.N)));
  s.qals.lambda0 = kv.get("qals.lambda0", s.qals.lambda0);
  s.qals.k = static_cast<int>(kv.get("qals.k", static_cast<long>(s.qals.k)));
  s.qals.n_max = static_cast<int>(kv.get("qals.n_max", static_cast<long>(s.qals.n_max)));
  s.qals.d_min = static_cast<int>(kv.get("qals.d_min", static_cast<long>(s.qals.d_min)));
  s.qals.tabu_spin_form = kv.get("qals.tabu_spin_form", s.qals.tabu_spin_form);
  s.qals.energy_scale = kv.get("qals.energy_scale", s.qals.energy_scale);
  if (s.name == "qals") {
    try {
      s.qals.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("qals: ") + e.what());
    }
  }

  s.sa.sweeps = static_cast<std::size_t>(kv.get("sa.sweeps", static_cast<long>(s.sa.sweeps)));
  s.sa.initial_temperature = kv.get("sa.initial_temperature", s.sa.initial_temperature);
  s.sa.final_temperature = kv.get("sa.final_temperature", s.sa.final_temperature);
  try {
    s.sa.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("sa: ") + e.what());
  }
  s.tabu.stall_limit = static_cast<std::size_t>(kv.get("tabu.stall_limit", 0L));
  s.tabu.tenure = static_cast<std::size_t>(kv.get("tabu.tenure", 0L));
  s.tabu.restarts = static_cast<std::size_t>(kv.get("tabu.restarts", 1L));

  c.repetitions = static_cast<int>(kv.get("run.repetitions", 1L));
  c.seed = static_cast<std::uint64_t>(kv.get("run.seed", 0L));
  c.jobs = static_cast<int>(kv.get("run.jobs", 1L));
  if (c.repetitions < 1) throw ConfigError("run.repetitions must be at least 1");
  if (c.jobs < 1) throw ConfigError("run.jobs must be at least 1");

  c.jsonl = kv.get("output.jsonl", std::string());
  c.csv = kv.get("output.csv", std::string());
  c.trace = kv.get("output.trace", std::string());
  kv.reject_unused();
  return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(KeyValues::load(path)); }

}  // namespace qals::bench
