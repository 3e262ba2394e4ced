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

#include "qals/baselines.hpp"

#include <algorithm>
#include <limits>
#include <thread>

namespace qals {

namespace {

// Pair coefficients as a dense symmetric matrix with the linear terms on the
// diagonal.
Eigen::MatrixXd symmetric_coefficients(const Qubo& q) {
  const auto& u = q.coeffs();
  Eigen::MatrixXd c = u.triangularView<Eigen::StrictlyUpper>();
  c += c.transpose().eval();
  c.diagonal() = u.diagonal();
  return c;
}

}  // namespace

Minimum tabu_search(const Qubo& q, const TabuSearchParams& params, Rng& rng) {
  const Index n = q.size();
  if (n == 0) return {Bits(0), 0.0};
  const Eigen::MatrixXd c = symmetric_coefficients(q);
  const std::size_t stall_limit = params.stall_limit ? params.stall_limit : 20 * n;
  const std::size_t tenure =
      params.tenure ? params.tenure : std::min<std::size_t>(20, static_cast<std::size_t>(n / 4 + 1));
  const std::size_t restarts = std::max<std::size_t>(1, params.restarts);

  Minimum best{Bits::Zero(n), std::numeric_limits<double>::infinity()};
  std::bernoulli_distribution coin(0.5);
  for (std::size_t r = 0; r < restarts; ++r) {
    Bits x(n);
    for (Index i = 0; i < n; ++i) x[i] = coin(rng) ? 1 : 0;
    Eigen::VectorXd xd = x.cast<double>();
    // field[i] = sum_{j != i} c_ij x_j
    Eigen::VectorXd field = c * xd - c.diagonal().cwiseProduct(xd);
    double energy = evaluate(q, x);
    Bits run_best = x;
    double run_best_energy = energy;
    std::vector<std::size_t> frozen_until(static_cast<std::size_t>(n), 0);

    std::size_t stall = 0;
    for (std::size_t it = 1; stall < stall_limit; ++it) {
      Index move = -1;
      double move_delta = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < n; ++i) {
        const double delta = (x[i] ? -1.0 : 1.0) * (c(i, i) + field[i]);
        const bool allowed = frozen_until[i] < it || energy + delta < run_best_energy;
        if (allowed && delta < move_delta) {
          move = i;
          move_delta = delta;
        }
      }
      if (move < 0) break;
      const double sign = x[move] ? -1.0 : 1.0;
      x[move] ^= 1;
      field += sign * c.col(move);
      field[move] -= sign * c(move, move);
      energy += move_delta;
      frozen_until[move] = it + tenure;
      if (energy < run_best_energy) {
        run_best_energy = energy;
        run_best = x;
        stall = 0;
      } else {
        ++stall;
      }
    }
    const double exact = evaluate(q, run_best);
    if (exact < best.value) best = {run_best, exact};
  }
  return best;
}

Weights qubo_weights(const Qubo& q) {
  Weights w;
  const auto& u = q.coeffs();
  for (Index i = 0; i < q.size(); ++i) {
    w.linear[static_cast<int>(i)] = u(i, i);
    for (Index j = i + 1; j < q.size(); ++j) {
      if (u(i, j) != 0.0) w.quadratic[{static_cast<int>(i), static_cast<int>(j)}] = u(i, j);
    }
  }
  return w;
}

Minimum anneal_qubo(const Qubo& q, const SaSchedule& schedule, int reads, std::uint64_t seed) {
  SaSampler sampler(nullptr, schedule, seed);
  const SampleResult r = sampler.sample({qubo_weights(q), reads});
  Bits x = Bits::Zero(q.size());
  for (const auto& [node, bit] : r.assignment) x[node] = bit;
  return {x, evaluate(q, x)};
}

RaceResult race_solve(const Qubo& q, const TabuSearchParams& tabu, const SaSchedule& schedule,
                      int reads, std::uint64_t seed) {
  Minimum from_tabu;
  Minimum from_sa;
  std::exception_ptr failure;
  std::thread worker([&] {
    try {
      Rng rng(seed);
      from_tabu = tabu_search(q, tabu, rng);
    } catch (...) {
      failure = std::current_exception();
    }
  });
  try {
    from_sa = anneal_qubo(q, schedule, reads, seed + 1);
  } catch (...) {
    worker.join();
    throw;
  }
  worker.join();
  if (failure) std::rethrow_exception(failure);
  if (from_sa.value < from_tabu.value) return {std::move(from_sa), "sa"};
  return {std::move(from_tabu), "tabu"};
}

}  // namespace qals
