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

#include "qals/qubo.hpp"
#include "qals/random.hpp"
#include "qals/sampler.hpp"

namespace qals {

struct TabuSearchParams {
  // Moves without improving the best before giving up; 0 picks 20 n.
  std::size_t stall_limit = 0;
  // Iterations a flipped bit stays frozen; 0 picks min(20, n / 4 + 1).
  std::size_t tenure = 0;
  std::size_t restarts = 1;
};

/// Classical single-flip tabu search. Each restart begins from a uniform
/// random assignment; a frozen bit may still move when it yields a new best.
Minimum tabu_search(const Qubo& q, const TabuSearchParams& params, Rng& rng);

struct RaceResult {
  Minimum best;
  const char* winner;  // "tabu" or "sa"
};

/// Runs tabu search and direct simulated annealing on the whole QUBO in two
/// threads and keeps the lower energy (tabu on ties). A classical stand-in,
/// not a reproduction of any vendor hybrid service.
RaceResult race_solve(const Qubo& q, const TabuSearchParams& tabu, const SaSchedule& schedule,
                      int reads, std::uint64_t seed);

/// Every nonzero coefficient of q as sampler weights on nodes 0..n-1.
Weights qubo_weights(const Qubo& q);

/// Direct SA over the unrestricted QUBO.
Minimum anneal_qubo(const Qubo& q, const SaSchedule& schedule, int reads, std::uint64_t seed);

}  // namespace qals
