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
#include <vector>

#include "qals/qubo.hpp"

namespace qals {

/// Number partitioning instance: positive integers and their sum c.
class NppInstance {
 public:
  explicit NppInstance(std::vector<std::int64_t> numbers);

  const std::vector<std::int64_t>& numbers() const noexcept { return numbers_; }
  std::int64_t sum() const noexcept { return sum_; }
  std::size_t size() const noexcept { return numbers_.size(); }

 private:
  std::vector<std::int64_t> numbers_;
  std::int64_t sum_ = 0;
};

/// Q_ii = s_i (s_i - c), pair coefficient 2 s_i s_j, so that
/// c^2 + 4 x^T Q x = (c - 2 sum_i s_i x_i)^2.
Qubo npp_to_qubo(const NppInstance& inst);

/// |sum of subset x=1 - sum of subset x=0|, in integer arithmetic.
std::int64_t npp_diff(const NppInstance& inst, const Bits& x);

/// Largest first into the currently lighter subset; equal sums go to subset 1.
Bits greedy_partition(const NppInstance& inst);

/// Karmarkar-Karp differencing: the residual left after repeatedly replacing
/// the two largest numbers with their difference.
std::int64_t kk_heuristic(const NppInstance& inst);

struct CkkResult {
  Bits partition;
  std::int64_t difference = 0;
  bool truncated = false;   // node budget ran out before the search finished
  std::uint64_t nodes = 0;  // search nodes expanded
};

/// Complete Karmarkar-Karp: depth-first over difference (left) and sum
/// (right) branches on the two largest numbers. Stops at a perfect partition
/// (0, or 1 when the total is odd).
CkkResult ckk_solve(const NppInstance& inst,
                    std::optional<std::uint64_t> node_budget = std::nullopt);

NppInstance read_npp(std::istream& in);
void write_npp(std::ostream& out, const NppInstance& inst);

}  // namespace qals
