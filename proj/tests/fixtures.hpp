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

// Worked number-partitioning example, transcribed verbatim.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace fixture {

inline const std::vector<std::int64_t> kWorkedNumbers{8, 21, 6, 7, 16, 9, 10, 27};

// Symmetric NPP matrix for kWorkedNumbers as printed.
inline Eigen::MatrixXd worked_npp_matrix() {
  Eigen::MatrixXd q(8, 8);
  q << -768, 168, 48, 56, 128, 72, 80, 216,
       168, -1743, 126, 147, 336, 189, 210, 567,
       48, 126, -588, 42, 96, 54, 60, 162,
       56, 147, 42, -679, 112, 63, 70, 189,
       128, 336, 96, 112, -1408, 144, 160, 432,
       72, 189, 54, 63, 144, -855, 90, 243,
       80, 210, 60, 70, 160, 90, -940, 270,
       216, 567, 162, 189, 432, 243, 270, -2079;
  return q;
}

inline const std::vector<int> kWorkedSolution{1, 1, 1, 1, 0, 0, 1, 0};
inline constexpr double kWorkedMinimum = -2704;
inline constexpr std::int64_t kWorkedSumSquared = 10816;

}  // namespace fixture
