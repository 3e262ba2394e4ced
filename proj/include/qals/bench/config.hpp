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
#include <map>
#include <optional>
#include <set>
#include <string>

#include "qals/baselines.hpp"
#include "qals/error.hpp"
#include "qals/qals.hpp"
#include "qals/sampler.hpp"

namespace qals::bench {

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat "section.key" -> value map read from a TOML-like file:
///
///   [problem]
///   kind = npp
///   size = 16
///
/// Keys before the first section header have no prefix. Values may be
/// wrapped in double quotes. Every key must be consumed, so typos surface
/// as errors.
class KeyValues {
 public:
  static KeyValues parse(std::istream& in);
  static KeyValues load(const std::string& path);

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  long get(const std::string& key, long fallback) const;
  double get(const std::string& key, double fallback) const;
  bool get(const std::string& key, bool fallback) const;
  // Throws ConfigError naming the first key nobody asked for.
  void reject_unused() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

enum class ProblemKind { kNpp, kTsp, kQubo };

ProblemKind parse_problem_kind(const std::string& text);
const char* to_string(ProblemKind kind);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kNpp;
  std::string file;  // empty: generate from size, range, seed
  int size = 0;
  std::optional<double> range;
  std::uint64_t seed = 0;
};

struct BackendSpec {
  enum class Kind { kExhaustive, kSa, kRandom, kBridge };
  Kind kind = Kind::kSa;
  std::string command;  // bridge only

  // "exhaustive", "sa", "random" or "bridge:<command>".
  static BackendSpec parse(const std::string& text);
  std::string label() const;
};

struct SolverSpec {
  // qals, sa, sample, exhaustive, brute, ckk, greedy, tabu, race
  std::string name = "qals";
  BackendSpec backend;
  // complete, ring, chimera:<m> or file:<path>
  std::string topology = "complete";
  int reads = 10;
  int exhaustive_cap = kDefaultExhaustiveCap;
  int tour_cap = 12;
  QalsParams qals;
  SaSchedule sa;
  TabuSearchParams tabu;
};

struct RunConfig {
  ProblemSpec problem;
  SolverSpec solver;
  int repetitions = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string jsonl;
  std::string csv;
  std::string trace;
};

RunConfig parse_run_config(const KeyValues& kv);
RunConfig load_run_config(const std::string& path);

}  // namespace qals::bench
