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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "qals/bench/commands.hpp"
#include "qals/npp.hpp"
#include "qals/qals.hpp"
#include "qals/tsp.hpp"
#include "trace_laws.hpp"

using namespace qals;

namespace {

using Clock = std::chrono::steady_clock;

// Outcome of one criterion: empty `failure` means it held.
struct Verdict {
  std::string failure;
  std::string detail;
};

Verdict fail(const std::string& why) { return {why, {}}; }

Bits bits_of(const std::vector<int>& v) {
  Bits x(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Index>(i)] = static_cast<std::uint8_t>(v[i]);
  return x;
}

Verdict npp_golden() {
  const NppInstance inst(fixture::kWorkedNumbers);
  const Qubo q = npp_to_qubo(inst);
  const Eigen::MatrixXd printed = fixture::worked_npp_matrix();
  for (Index i = 0; i < 8; ++i) {
    if (q(i, i) != printed(i, i)) return fail("diagonal differs at " + std::to_string(i));
    for (Index j = i + 1; j < 8; ++j) {
      if (q(i, j) != 2 * printed(i, j)) return fail("pair coefficient differs");
    }
  }
  const Minimum m = brute_force(q);
  if (m.value != fixture::kWorkedMinimum) return fail("brute-force minimum " + std::to_string(m.value));
  const Bits x = bits_of(fixture::kWorkedSolution);
  if (evaluate(q, x) != fixture::kWorkedMinimum) return fail("listed solution has another energy");
  const std::int64_t c = inst.sum();
  if (c * c != fixture::kWorkedSumSquared) return fail("c^2 mismatch");
  if (c * c + 4 * static_cast<std::int64_t>(m.value) != 0) return fail("c^2 + 4y is not 0");
  if (npp_diff(inst, m.x) != 0) return fail("minimizer does not split evenly");
  return {{}, "min -2704, c^2 + 4y = 0"};
}

Verdict projection_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 64);
  std::uniform_real_distribution<double> density(0.05, 0.9);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    const Topology t = gen::random_topology(n + static_cast<int>(rng() % 6), density(rng), rng);
    const Eigen::MatrixXd m = oracle::random_matrix(n, rng);
    const PermutationState s = gen::random_permutation(n, rng);
    const EmbeddedProblem e = project_weights(Qubo(m), t, s);
    const ActiveRegion region = active_region(t, n);
    Eigen::MatrixXd adjacency = Eigen::MatrixXd::Identity(n, n);
    for (const auto& [a, b] : region.edges) adjacency(a, b) = adjacency(b, a) = 1.0;
    const Eigen::MatrixXd want = oracle::masked_projection(m, s.perm(), adjacency);

    std::size_t couplers = 0;
    for (int a = 0; a < n; ++a) {
      worst = std::max(worst, std::abs(e.weights.linear.at(region.nodes[a]) - want(a, a)));
      for (int b = a + 1; b < n; ++b) {
        const double expect = want(a, b) + want(b, a);
        const auto it = e.weights.quadratic.find({region.nodes[a], region.nodes[b]});
        if (adjacency(a, b) == 0.0) {
          if (it != e.weights.quadratic.end()) return fail("weight on a missing coupler");
          continue;
        }
        if (it == e.weights.quadratic.end()) return fail("coupler weight missing");
        ++couplers;
        worst = std::max(worst, std::abs(it->second - expect));
      }
    }
    if (couplers != e.weights.quadratic.size()) return fail("extra coupler weights");
  }
  if (worst > 1e-12) return fail("max deviation " + std::to_string(worst));
  std::ostringstream d;
  d << "100 cases, max deviation " << worst;
  return {{}, d.str()};
}

Verdict spot_value() {
  Eigen::MatrixXd m(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) m(i, j) = 5 * i + j + 1;
  }
  const double v = permuted_entry(m, PermutationState({3, 0, 4, 1, 2}), 1, 2);
  if (v != 20.0) return fail("entry (1,2) is " + std::to_string(v));
  const auto inv = PermutationState({2, 0, 3, 4, 1}).inverse();
  if (inv != std::vector<Index>{1, 4, 0, 2, 3}) return fail("inverse differs");
  return {{}, "entry 20, inverse [1,4,0,2,3]"};
}

Verdict qals_lossless() {
  std::mt19937_64 rng(77);
  std::vector<Qubo> problems;
  std::vector<double> optimum;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const Eigen::MatrixXd m = oracle::random_integer_matrix(n, rng);
    problems.emplace_back(m);
    optimum.push_back(oracle::minimum(m));
  }
  problems.push_back(npp_to_qubo(NppInstance(fixture::kWorkedNumbers)));
  optimum.push_back(fixture::kWorkedMinimum);
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const Qubo& q = problems[k];
    ExhaustiveSampler sampler;
    Rng run_rng(k);
    const QalsResult r = run_qals(q, complete_graph(static_cast<int>(q.size())), sampler,
                                  QalsParams::npp_defaults(10), run_rng);
    if (r.value != optimum[k] || evaluate(q, r.solution) != optimum[k]) {
      return fail("instance " + std::to_string(k) + " returned " + std::to_string(r.value));
    }
  }
  return {{}, "21 instances at the global optimum"};
}

Verdict ckk_exact() {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int range : {100, 1000}) {
    for (int k = 0; k < 100; ++k) {
      const auto s = gen::random_numbers(1 + static_cast<int>(rng() % 14), range, rng);
      const NppInstance inst(s);
      const CkkResult r = ckk_solve(inst);
      if (r.truncated) return fail("search truncated without a budget");
      if (r.difference != oracle::best_partition(s)) return fail("difference is not optimal");
      if (npp_diff(inst, r.partition) != r.difference) return fail("partition does not match");
      ++checked;
    }
  }
  // Fourteen equal numbers split perfectly on the first descent; without the
  // early exit the search would go on to visit the sum branches.
  std::vector<std::int64_t> even(14, 2);
  std::vector<std::int64_t> odd = even;
  odd[0] = 3;
  const CkkResult e = ckk_solve(NppInstance(even));
  const CkkResult o = ckk_solve(NppInstance(odd));
  if (e.difference != 0 || e.nodes > 14) return fail("no early exit at difference 0");
  if (o.difference != 1 || o.nodes > 14) return fail("no early exit at difference 1 on an odd total");
  std::ostringstream d;
  d << checked << " instances optimal, early exit after " << e.nodes << " and " << o.nodes << " nodes";
  return {{}, d.str()};
}

// Tour from the bit layout when it is a permutation matrix, else empty.
std::vector<int> tour_of(const Bits& x, int n) {
  std::vector<int> tour;
  std::vector<int> column(static_cast<std::size_t>(n), 0);
  for (int t = 0; t < n; ++t) {
    int count = 0;
    for (int c = 0; c < n; ++c) {
      if (x[t * n + c]) {
        ++count;
        ++column[c];
        tour.push_back(c);
      }
    }
    if (count != 1) return {};
  }
  for (int c : column) {
    if (c != 1) return {};
  }
  return tour;
}

Verdict tsp_qubo() {
  std::mt19937_64 rng(5);
  int instances = 0;
  for (int n : {3, 4}) {
    for (int k = 0; k < 5; ++k) {
      const Eigen::MatrixXd w = gen::random_distances(n, rng);
      const TspQubo tq = tsp_to_qubo(TspInstance(w));
      const double a = n * w.maxCoeff();
      if (tq.penalty != a || tq.multiplier != 1.0) return fail("A or B differ from n max W and 1");
      double best_valid = std::numeric_limits<double>::infinity();
      double best_invalid = std::numeric_limits<double>::infinity();
      const int bits = n * n;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        Bits x(bits);
        for (int b = 0; b < bits; ++b) x[b] = static_cast<std::uint8_t>((mask >> b) & 1u);
        const double energy = evaluate(tq.qubo, x);
        const auto tour = tour_of(x, n);
        if (tour.empty()) {
          best_invalid = std::min(best_invalid, energy);
          continue;
        }
        best_valid = std::min(best_valid, energy);
        double length = 0.0;
        for (int t = 0; t < n; ++t) length += w(tour[t], tour[(t + 1) % n]);
        if (std::abs(energy + 2 * a * n - length) > 1e-9) return fail("valid energy + 2An != length");
      }
      if (!(best_invalid > best_valid)) return fail("an invalid assignment reaches the valid minimum");
      if (std::abs(best_valid + 2 * a * n - oracle::best_tour(w)) > 1e-9) {
        return fail("QUBO minimum is not the shortest tour");
      }
      ++instances;
    }
  }
  return {{}, std::to_string(instances) + " instances, all 2^(n^2) assignments"};
}

Verdict refinement() {
  Rng rng(6);
  std::mt19937_64 draw(7);
  const int n = 6;
  for (int k = 0; k < 1000; ++k) {
    Bits x(n * n);
    for (int b = 0; b < n * n; ++b) x[b] = static_cast<std::uint8_t>(draw() & 1u);
    if (!is_valid_tour(refine_tsp_solution(x, n, rng), n)) return fail("refined string is not a tour");
  }
  Tour perm{0, 1, 2, 3, 4, 5};
  for (int k = 0; k < 100; ++k) {
    std::shuffle(perm.begin(), perm.end(), draw);
    if (refine_tsp_solution(encode_tour(perm), n, rng) != perm) return fail("valid tour was altered");
  }
  if (refine_tsp_solution(bits_of({0, 1, 0, 1, 0, 0, 0, 0, 1}), 3, rng) != Tour{1, 0, 2}) {
    return fail("worked example does not refine to [1, 0, 2]");
  }
  return {{}, "1000 random strings, 100 fixed points"};
}

Verdict trace_invariants() {
  std::mt19937_64 rng(8);
  const int n = 16;
  const Qubo q(oracle::random_integer_matrix(n, rng));
  auto ring = std::make_shared<const Topology>(cycle_graph(n));
  const QalsParams params = QalsParams::npp_defaults(200);
  SaSchedule schedule;
  schedule.sweeps = 200;
  std::size_t iterations = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SaSampler first(ring, schedule, 1000 + seed);
    SaSampler second(ring, schedule, 1000 + seed);
    Rng r1(seed);
    Rng r2(seed);
    const QalsResult a = run_qals(q, *ring, first, params, r1);
    const QalsResult b = run_qals(q, *ring, second, params, r2);
    const auto bad = laws::trace_violations(a.trace, params, a, q);
    if (!bad.empty()) return fail("seed " + std::to_string(seed) + ": " + bad.front());
    if (!laws::same_trace(a.trace, b.trace) || a.solution != b.solution) {
      return fail("seed " + std::to_string(seed) + ": replay diverged");
    }
    iterations += a.trace.iterations.size();
  }
  return {{}, "10 seeds, " + std::to_string(iterations) + " iterations replayed"};
}

Verdict chimera_gate() {
  int wins = 0;
  std::ostringstream d;
  for (std::uint64_t s = 0; s < 10; ++s) {
    bench::RunConfig c;
    c.problem.kind = bench::ProblemKind::kNpp;
    c.problem.size = 16;
    c.problem.range = 100;
    c.problem.seed = s;
    c.solver.name = "qals";
    c.solver.backend.kind = bench::BackendSpec::Kind::kSa;
    c.solver.topology = "chimera:2";
    c.solver.qals = QalsParams::npp_defaults(4000);
    const bench::Report r = bench::cmd_solve(c);
    const auto& run = r.runs.at(0);
    if (run.failed || !run.objective) return fail("seed " + std::to_string(s) + " failed: " + run.error);
    std::istringstream text(r.header.instance_text);
    const NppInstance inst = read_npp(text);
    const std::int64_t greedy = npp_diff(inst, greedy_partition(inst));
    const auto qals_diff = static_cast<std::int64_t>(*run.objective);
    if (qals_diff <= greedy) ++wins;
    d << (s ? " " : "") << qals_diff << "/" << greedy;
  }
  if (wins < 7) return fail(std::to_string(wins) + " of 10 at or below greedy (" + d.str() + ")");
  return {{}, std::to_string(wins) + " of 10 at or below greedy (qals/greedy: " + d.str() + ")"};
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"npp-golden", 1, npp_golden},
      {"projection-equivalence", 5, projection_equivalence},
      {"permuted-spot-value", 1, spot_value},
      {"qals-lossless-optimum", 30, qals_lossless},
      {"ckk-exactness", 60, ckk_exact},
      {"tsp-qubo", 30, tsp_qubo},
      {"refinement-validity", 5, refinement},
      {"qals-trace-invariants", 120, trace_invariants},
      {"chimera-npp-gate", 600, chimera_gate},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (v.failure.empty() && elapsed > c.budget_s) {
      v.failure = "took " + std::to_string(elapsed) + " s, budget " + std::to_string(c.budget_s) + " s";
    }
    const bool ok = v.failure.empty();
    if (!ok) ++failed;
    std::printf("%s %-24s %8.3fs  %s\n", ok ? "PASS" : "FAIL", c.name, elapsed,
                ok ? v.detail.c_str() : v.failure.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
