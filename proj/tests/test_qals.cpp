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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "trace_laws.hpp"
#include "qals/npp.hpp"
#include "qals/qals.hpp"

using namespace qals;

namespace {

const std::vector<std::int64_t> kWorkedNpp{8, 21, 6, 7, 16, 9, 10, 27};

Bits bits(std::initializer_list<int> v) {
  Bits out(static_cast<Index>(v.size()));
  Index i = 0;
  for (int b : v) out[i++] = static_cast<std::uint8_t>(b);
  return out;
}

void check_trace_laws(const QalsResult& r, const QalsParams& params, const Qubo& q) {
  for (const auto& v : laws::trace_violations(r.trace, params, r, q)) FAIL_CHECK(v);
}

}  // namespace

TEST_CASE("permutation state keeps its inverse") {
  const PermutationState s({2, 0, 3, 4, 1});
  CHECK(s.inverse() == std::vector<Index>{1, 4, 0, 2, 3});
  CHECK(PermutationState::identity(4).perm() == std::vector<Index>{0, 1, 2, 3});
  CHECK_THROWS_AS(PermutationState({0, 0, 1}), Error);
  CHECK_THROWS_AS(PermutationState({0, 3, 1}), Error);
}

TEST_CASE("perturb_permutation") {
  Rng rng(11);
  const PermutationState id = PermutationState::identity(20);
  CHECK(perturb_permutation(id, 0.0, rng) == id);
  CHECK_THROWS_AS(perturb_permutation(id, 1.5, rng), Error);

  SUBCASE("output is always a permutation") {
    for (int t = 0; t < 200; ++t) {
      const auto s = perturb_permutation(id, 0.3, rng);
      for (Index i = 0; i < s.size(); ++i) CHECK(s.inverse()[s.perm()[i]] == i);
    }
  }

  SUBCASE("unselected positions stay put") {
    // With p small most positions are fixed points; the moved ones form a
    // set closed under the permutation.
    for (int t = 0; t < 200; ++t) {
      const auto s = perturb_permutation(id, 0.1, rng);
      std::set<Index> moved;
      for (Index i = 0; i < s.size(); ++i) {
        if (s.perm()[i] != i) moved.insert(i);
      }
      for (Index i : moved) CHECK(moved.count(s.perm()[i]) == 1);
    }
  }

  SUBCASE("full shuffle is uniform over positions") {
    const int n = 52;
    const int trials = 100000;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n * n), 0);
    const PermutationState start = PermutationState::identity(n);
    for (int t = 0; t < trials; ++t) {
      const auto s = perturb_permutation(start, 1.0, rng);
      for (int a = 0; a < n; ++a) ++counts[static_cast<std::size_t>(s.perm()[a] * n + a)];
    }
    const double stat = oracle::chi_square(counts);
    CHECK(stat < oracle::chi_square_critical((n - 1.0) * (n - 1.0), 0.001));
  }
}

TEST_CASE("permuted entry of the 1..25 matrix") {
  Eigen::MatrixXd m(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) m(i, j) = 5 * i + j + 1;
  }
  const PermutationState s({3, 0, 4, 1, 2});
  CHECK(permuted_entry(m, s, 1, 2) == 20.0);
  const Eigen::MatrixXd full = oracle::masked_projection(m, {3, 0, 4, 1, 2}, Eigen::MatrixXd::Ones(5, 5));
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) CHECK(permuted_entry(m, s, a, b) == full(a, b));
  }
}

TEST_CASE("project_weights matches the dense masked product") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(1, 64);
  std::uniform_real_distribution<double> density(0.05, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    const int extra = static_cast<int>(rng() % 5);
    const Topology t = gen::random_topology(n + extra, density(rng), rng);
    const Eigen::MatrixXd m = oracle::random_matrix(n, rng);
    const PermutationState s = gen::random_permutation(n, rng);

    const EmbeddedProblem e = project_weights(Qubo(m), t, s);
    const ActiveRegion region = active_region(t, n);
    Eigen::MatrixXd adjacency = Eigen::MatrixXd::Identity(n, n);
    for (const auto& [a, b] : region.edges) adjacency(a, b) = adjacency(b, a) = 1.0;
    const Eigen::MatrixXd want = oracle::masked_projection(m, s.perm(), adjacency);

    CHECK(e.weights.linear.size() == static_cast<std::size_t>(n));
    CHECK(e.weights.quadratic.size() == region.edges.size());
    for (Index a = 0; a < n; ++a) {
      CHECK(std::abs(e.weights.linear.at(region.nodes[a]) - want(a, a)) <= 1e-12);
      CHECK(e.node_index.at(region.nodes[a]) == s.inverse()[a]);
    }
    for (const auto& [a, b] : region.edges) {
      const double got = e.weights.quadratic.at({region.nodes[a], region.nodes[b]});
      CHECK(std::abs(got - (want(a, b) + want(b, a))) <= 1e-12);
    }
  }
}

TEST_CASE("project_weights rejects a short topology") {
  CHECK_THROWS_AS(project_weights(Qubo(4), cycle_graph(3), PermutationState::identity(4)),
                  DimensionError);
}

TEST_CASE("identity projection on a complete graph is the folded matrix") {
  std::mt19937_64 rng(8);
  const Qubo q(oracle::random_matrix(6, rng));
  const EmbeddedProblem e = project_weights(q, complete_graph(6), PermutationState::identity(6));
  for (int i = 0; i < 6; ++i) {
    CHECK(e.weights.linear.at(i) == q(i, i));
    for (int j = i + 1; j < 6; ++j) CHECK(e.weights.quadratic.at({i, j}) == q(i, j));
  }
}

TEST_CASE("map_back") {
  const PermutationState s({2, 0, 3, 4, 1});
  // Positions carry (a,b,c,d,e) = (0,1,2,3,4) as values.
  Bits z(5);
  z << 10, 11, 12, 13, 14;
  const Bits back = map_back(z, s);
  // Variable i sits on position perm[i]: (c, a, d, e, b).
  CHECK(back == bits({12, 10, 13, 14, 11}));
  const Eigen::VectorXd dense = oracle::permutation_matrix(s.perm()) * z.cast<double>();
  CHECK(back.cast<double>() == dense);
  CHECK(map_back(z, PermutationState::identity(5)) == z);
  CHECK_THROWS_AS(map_back(Bits::Zero(4), s), DimensionError);
}

TEST_CASE("map_back after exhaustive sampling preserves energy") {
  std::mt19937_64 rng(21);
  ExhaustiveSampler sampler;
  for (int trial = 0; trial < 20; ++trial) {
    const Qubo q(oracle::random_integer_matrix(7, rng));
    const PermutationState s = gen::random_permutation(7, rng);
    const EmbeddedProblem e = project_weights(q, complete_graph(7), s);
    const SampleResult r = sampler.sample({e.weights, 1});
    const Bits back = map_back(r.assignment, e);
    CHECK(evaluate(q, back) == r.energy);
    Bits positional(7);
    for (int a = 0; a < 7; ++a) positional[a] = r.assignment.at(a);
    CHECK(map_back(positional, s) == back);
  }
  Assignment partial{{0, 1}};
  const EmbeddedProblem e = project_weights(Qubo(2), complete_graph(2), PermutationState::identity(2));
  CHECK_THROWS_AS(map_back(partial, e), Error);
}

TEST_CASE("tabu term") {
  CHECK(tabu_term(Bits::Ones(4)) == Eigen::MatrixXd::Ones(4, 4));
  CHECK(tabu_term(Bits::Zero(4)) == -Eigen::MatrixXd::Identity(4, 4));
  const Eigen::MatrixXd spin = tabu_term(bits({1, 0, 1}), true);
  Eigen::MatrixXd want(3, 3);
  want << 1, -1, 1, -1, 1, -1, 1, -1, 1;
  want.diagonal() += Eigen::Vector3d(1, -1, 1) - Eigen::Vector3d::Ones();
  CHECK(spin == want);

  TabuState t = TabuState::zero(3, 2.0);
  t = tabu_update(t, bits({1, 1, 0}));
  t = tabu_update(t, bits({0, 1, 1}));
  CHECK(t.updates == 2);
  CHECK(t.matrix == t.matrix.transpose());
  CHECK(t.matrix == tabu_term(bits({1, 1, 0})) + tabu_term(bits({0, 1, 1})));
  CHECK_THROWS_AS(tabu_update(t, Bits::Zero(2)), DimensionError);
}

TEST_CASE("a penalized candidate never becomes the minimizer") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const Eigen::MatrixXd m = oracle::random_integer_matrix(n, rng);
    Bits z(n);
    for (int i = 0; i < n; ++i) z[i] = static_cast<std::uint8_t>(rng() & 1u);
    const Eigen::MatrixXd term = tabu_term(z);
    std::vector<int> zv(z.data(), z.data() + n);
    // z maximizes its own penalty.
    const double own = oracle::quadratic_form(term, zv);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      CHECK(oracle::quadratic_form(term, oracle::bits_of(mask, n)) <= own);
    }
    TabuState tabu = tabu_update(TabuState::zero(n, 1.0), z);
    const Qubo augmented = tabu_augmented(Qubo(m), tabu);
    const Eigen::MatrixXd dense = m + term;
    if (oracle::quadratic_form(m, zv) > oracle::minimum(m)) {
      CHECK(evaluate(augmented, z) > oracle::minimum(dense));
    }
    CHECK(std::abs(brute_force(augmented).value - oracle::minimum(dense)) < 1e-9);
  }
}

TEST_CASE("perturb_candidate") {
  Rng rng(17);
  const Bits z = bits({1, 0, 0, 1, 1, 0});
  CHECK(perturb_candidate(z, 0.0, rng) == z);
  Bits complement = z;
  for (Index i = 0; i < z.size(); ++i) complement[i] ^= 1u;
  CHECK(perturb_candidate(z, 1.0, rng) == complement);
  const Bits big = Bits::Zero(1000);
  for (int t = 0; t < 1000; ++t) {
    const Index h = perturb_candidate(big, 0.5, rng).cast<Index>().sum();
    CHECK(h >= 400);
    CHECK(h <= 600);
  }
}

TEST_CASE("parameter validation") {
  QalsParams p;
  CHECK_THROWS_AS(p.validate(), Error);  // i_max missing
  p.i_max = 10;
  CHECK_NOTHROW(p.validate());
  for (double bad : {0.0, 0.5, -0.1}) {
    QalsParams b = p;
    b.p_delta = bad;
    CHECK_THROWS_AS(b.validate(), Error);
  }
  QalsParams b = p;
  b.N = 0;
  CHECK_THROWS_AS(b.validate(), Error);
  CHECK(QalsParams::tsp_defaults(5).eta == 0.2);
  CHECK(QalsParams::npp_defaults(5).eta == 0.01);
}

TEST_CASE("QALS on the worked NPP example finds the optimum at initialization") {
  const Qubo q = npp_to_qubo(NppInstance(kWorkedNpp));
  ExhaustiveSampler sampler;
  Rng rng(1);
  const QalsResult r = run_qals(q, complete_graph(8), sampler, QalsParams::npp_defaults(0), rng);
  CHECK(r.trace.iterations.empty());
  CHECK(r.value == -2704);
  CHECK(std::min(r.trace.f1, r.trace.f2) == -2704);
  CHECK(npp_diff(NppInstance(kWorkedNpp), r.solution) == 0);
}

TEST_CASE("i_max zero returns the better initialization sample") {
  std::mt19937_64 rng_q(2);
  const Qubo q(oracle::random_integer_matrix(10, rng_q));
  RandomSampler sampler(4);
  Rng rng(9);
  const QalsResult r = run_qals(q, cycle_graph(10), sampler, QalsParams::npp_defaults(0), rng);
  CHECK(r.trace.iterations.empty());
  CHECK(r.value == std::min(r.trace.f1, r.trace.f2));
  CHECK(evaluate(q, r.solution) == r.value);
}

TEST_CASE("QALS on a ring beats random assignments") {
  std::mt19937_64 rng_q(12);
  const Qubo q(oracle::random_integer_matrix(12, rng_q));
  const Topology ring = cycle_graph(12);
  QalsParams params = QalsParams::npp_defaults(60);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ExhaustiveSampler sampler;
    Rng rng(seed);
    const QalsResult r = run_qals(q, ring, sampler, params, rng);
    std::mt19937_64 pick(1000 + seed);
    double random_best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 20; ++t) {
      Bits x(12);
      for (int i = 0; i < 12; ++i) x[i] = static_cast<std::uint8_t>(pick() & 1u);
      random_best = std::min(random_best, evaluate(q, x));
    }
    CHECK(r.value <= random_best);
    check_trace_laws(r, params, q);
  }
}

TEST_CASE("QALS trace laws and replay with the SA backend") {
  std::mt19937_64 rng_q(31);
  const Qubo q(oracle::random_integer_matrix(16, rng_q));
  auto ring = std::make_shared<const Topology>(cycle_graph(16));
  QalsParams params = QalsParams::npp_defaults(150);
  params.N = 7;
  SaSchedule schedule;
  schedule.sweeps = 100;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    SaSampler s1(ring, schedule, seed + 100);
    SaSampler s2(ring, schedule, seed + 100);
    Rng r1(seed);
    Rng r2(seed);
    const QalsResult a = run_qals(q, *ring, s1, params, r1);
    const QalsResult b = run_qals(q, *ring, s2, params, r2);
    check_trace_laws(a, params, q);
    CHECK(laws::same_trace(a.trace, b.trace));
    CHECK(a.solution == b.solution);
  }
}

TEST_CASE("QALS stops early on convergence") {
  const Qubo q = npp_to_qubo(NppInstance(kWorkedNpp));
  ExhaustiveSampler sampler;
  Rng rng(2);
  QalsParams params = QalsParams::npp_defaults(100000);
  params.n_max = 5;
  params.d_min = 3;
  const QalsResult r = run_qals(q, complete_graph(8), sampler, params, rng);
  CHECK(r.converged);
  CHECK(r.trace.iterations.size() < 100000u);
  const auto& last = r.trace.iterations.back();
  CHECK(last.e + last.d >= params.n_max);
  CHECK(last.d < params.d_min);
}

namespace {

class FailingSampler final : public Sampler {
 public:
  explicit FailingSampler(int ok) : ok_(ok) {}
  SampleResult sample(const SamplerRequest& request) override {
    if (calls_++ >= ok_) throw TransportError("link down");
    return inner_.sample(request);
  }
  std::string name() const override { return "failing"; }

 private:
  int ok_;
  int calls_ = 0;
  ExhaustiveSampler inner_;
};

}  // namespace

TEST_CASE("sampler failure aborts with the partial trace") {
  std::mt19937_64 rng_q(4);
  const Qubo q(oracle::random_integer_matrix(6, rng_q));
  FailingSampler sampler(7);
  Rng rng(0);
  try {
    run_qals(q, complete_graph(6), sampler, QalsParams::npp_defaults(50), rng);
    FAIL("expected an abort");
  } catch (const QalsAborted& e) {
    CHECK(e.trace().iterations.size() == 5u);
    CHECK(std::string(e.what()).find("link down") != std::string::npos);
  }
}

TEST_CASE("trace JSONL has one object per iteration") {
  const Qubo q = npp_to_qubo(NppInstance(kWorkedNpp));
  ExhaustiveSampler sampler;
  Rng rng(5);
  const QalsResult r = run_qals(q, complete_graph(8), sampler, QalsParams::npp_defaults(12), rng);
  std::ostringstream out;
  write_trace_jsonl(out, r.trace);
  std::istringstream in(out.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    CHECK(line.find("\"f_star\"") != std::string::npos);
    ++lines;
  }
  CHECK(lines == r.trace.iterations.size());
}

TEST_CASE("the trace replay notices tampering") {
  std::mt19937_64 rng_q(8);
  const Qubo q(oracle::random_integer_matrix(8, rng_q));
  ExhaustiveSampler sampler;
  Rng rng(3);
  const QalsParams params = QalsParams::npp_defaults(30);
  const QalsResult r = run_qals(q, cycle_graph(8), sampler, params, rng);
  REQUIRE(laws::trace_violations(r.trace, params, r, q).empty());
  REQUIRE(r.trace.iterations.size() > 2);
  QalsResult bad = r;
  bad.trace.iterations[1].e += 1;
  CHECK_FALSE(laws::trace_violations(bad.trace, params, bad, q).empty());
  bad = r;
  bad.trace.iterations[2].p += 0.5;
  CHECK_FALSE(laws::trace_violations(bad.trace, params, bad, q).empty());
  bad = r;
  bad.value -= 1;
  CHECK_FALSE(laws::trace_violations(bad.trace, params, bad, q).empty());
  CHECK(laws::same_trace(r.trace, bad.trace));
}
