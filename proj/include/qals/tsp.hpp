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

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qals/qubo.hpp"
#include "qals/sampler.hpp"

namespace qals {

inline constexpr double kMissingEdge = std::numeric_limits<double>::infinity();
inline constexpr int kDefaultTourCap = 12;

/// City distances W_uv; missing edges hold kMissingEdge.
class TspInstance {
 public:
  explicit TspInstance(Eigen::MatrixXd distances);

  Index size() const noexcept { return distances_.rows(); }
  const Eigen::MatrixXd& distances() const noexcept { return distances_; }
  double operator()(Index u, Index v) const { return distances_(u, v); }
  bool has_edge(Index u, Index v) const { return distances_(u, v) != kMissingEdge; }
  // Largest present off-diagonal weight.
  double max_weight() const;

 private:
  Eigen::MatrixXd distances_;
};

/// City visited at each cycle position.
using Tour = std::vector<Index>;

bool is_valid_tour(const Tour& tour, Index n);

/// Variable for "city at position": position * n + city.
inline Index tsp_variable(Index n, Index position, Index city) { return position * n + city; }

struct TspQubo {
  Qubo qubo;
  Index cities;
  double penalty;     // A
  double multiplier;  // B
  // Energy of a valid tour plus this equals B * tour length.
  double offset() const { return 2.0 * penalty * static_cast<double>(cities); }
};

/// H = H_A + H_B with B = 1 and A = n * max W. Cost couples position t to
/// position (t+1) mod n; missing edges cost A on those slots.
TspQubo tsp_to_qubo(const TspInstance& inst);

double tsp_cost(const TspInstance& inst, const Tour& tour);

struct TspOptimum {
  Tour tour;
  double cost;
};

/// Enumerates all tours starting at city 0; first lexicographic optimum wins.
TspOptimum tsp_brute_force(const TspInstance& inst, int cap = kDefaultTourCap);

/// Read the tour encoded by x when every position holds exactly one city and
/// every city appears once.
std::optional<Tour> decode_tour(const Bits& x, Index n);
Bits encode_tour(const Tour& tour);

/// Repair a possibly infeasible n^2 bit string into a tour, keeping positions
/// whose city was uniquely determined. Valid encodings come back unchanged.
Tour refine_tsp_solution(const Bits& x, Index n, Rng& rng);
Tour refine_tsp_solution(const Bits& x, const TspInstance& inst, Rng& rng);

TspInstance read_tsp(std::istream& in);
void write_tsp(std::ostream& out, const TspInstance& inst);
std::string format_tour(const Tour& tour);

}  // namespace qals
