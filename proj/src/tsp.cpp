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

#include "qals/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "qals/text.hpp"

namespace qals {

TspInstance::TspInstance(Eigen::MatrixXd distances) : distances_(std::move(distances)) {
  if (distances_.rows() < 1 || distances_.rows() != distances_.cols()) {
    throw DimensionError("distance matrix must be square and non-empty");
  }
  for (Index u = 0; u < size(); ++u) {
    if (distances_(u, u) != 0.0) throw Error("distance matrix must have a zero diagonal");
    for (Index v = 0; v < size(); ++v) {
      const double w = distances_(u, v);
      if (std::isnan(w) || w < 0.0) throw Error("distances must be non-negative");
    }
  }
}

double TspInstance::max_weight() const {
  double m = 0.0;
  for (Index u = 0; u < size(); ++u) {
    for (Index v = 0; v < size(); ++v) {
      if (u != v && has_edge(u, v)) m = std::max(m, distances_(u, v));
    }
  }
  return m;
}

bool is_valid_tour(const Tour& tour, Index n) {
  if (static_cast<Index>(tour.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const Index c : tour) {
    if (c < 0 || c >= n || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

TspQubo tsp_to_qubo(const TspInstance& inst) {
  const Index n = inst.size();
  if (n < 2) throw Error("TSP needs at least two cities");
  const double max_w = inst.max_weight();
  const double b = 1.0;
  // Any A > B max W keeps violations unfavourable; fall back to n when all
  // distances are zero.
  const double a = static_cast<double>(n) * (max_w > 0.0 ? max_w : 1.0);
  Qubo q(n * n);

  // Cost: city i at position t followed by city j at position (t+1) mod n.
  for (Index t = 0; t < n; ++t) {
    const Index next = (t + 1) % n;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double w = inst.has_edge(i, j) ? b * inst(i, j) : a;
        q.add(tsp_variable(n, t, i), tsp_variable(n, next, j), w);
      }
    }
  }
  // One city per position: A (1 - sum_i x_{t,i})^2 without the constant.
  for (Index t = 0; t < n; ++t) {
    for (Index i = 0; i < n; ++i) {
      q.add(tsp_variable(n, t, i), tsp_variable(n, t, i), -a);
      for (Index j = i + 1; j < n; ++j) q.add(tsp_variable(n, t, i), tsp_variable(n, t, j), 2.0 * a);
    }
  }
  // One position per city.
  for (Index i = 0; i < n; ++i) {
    for (Index t1 = 0; t1 < n; ++t1) {
      q.add(tsp_variable(n, t1, i), tsp_variable(n, t1, i), -a);
      for (Index t2 = t1 + 1; t2 < n; ++t2) {
        q.add(tsp_variable(n, t1, i), tsp_variable(n, t2, i), 2.0 * a);
      }
    }
  }
  return {std::move(q), n, a, b};
}

double tsp_cost(const TspInstance& inst, const Tour& tour) {
  if (!is_valid_tour(tour, inst.size())) throw Error("not a valid tour");
  double total = 0.0;
  const std::size_t n = tour.size();
  for (std::size_t t = 0; t < n; ++t) {
    const Index u = tour[t];
    const Index v = tour[(t + 1) % n];
    if (u != v && !inst.has_edge(u, v)) {
      throw Error("tour uses missing edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    total += inst(u, v);
  }
  return total;
}

TspOptimum tsp_brute_force(const TspInstance& inst, int cap) {
  const Index n = inst.size();
  if (n > cap) {
    throw CapacityError("brute-force TSP over " + std::to_string(n) + " cities exceeds cap " +
                        std::to_string(cap));
  }
  Tour tour(static_cast<std::size_t>(n));
  std::iota(tour.begin(), tour.end(), Index{0});
  TspOptimum best{tour, kMissingEdge};
  const auto& d = inst.distances();
  do {
    double cost = 0.0;
    for (Index t = 0; t < n; ++t) cost += d(tour[t], tour[(t + 1) % n]);
    if (cost < best.cost) best = {tour, cost};
  } while (std::next_permutation(tour.begin() + 1, tour.end()));
  if (best.cost == kMissingEdge) throw Error("instance has no Hamiltonian cycle");
  return best;
}

std::optional<Tour> decode_tour(const Bits& x, Index n) {
  if (x.size() != n * n) throw DimensionError("TSP solution must have n^2 bits");
  Tour tour;
  tour.reserve(static_cast<std::size_t>(n));
  for (Index t = 0; t < n; ++t) {
    Index city = -1;
    for (Index i = 0; i < n; ++i) {
      if (!x[tsp_variable(n, t, i)]) continue;
      if (city >= 0) return std::nullopt;
      city = i;
    }
    if (city < 0) return std::nullopt;
    tour.push_back(city);
  }
  if (!is_valid_tour(tour, n)) return std::nullopt;
  return tour;
}

Bits encode_tour(const Tour& tour) {
  const Index n = static_cast<Index>(tour.size());
  Bits x = Bits::Zero(n * n);
  for (Index t = 0; t < n; ++t) x[tsp_variable(n, t, tour[t])] = 1;
  return x;
}

Tour refine_tsp_solution(const Bits& x, Index n, Rng& rng) {
  if (n < 1 || x.size() != n * n) throw DimensionError("TSP solution must have n^2 bits");
  constexpr Index kEmpty = -1;
  Tour s(static_cast<std::size_t>(n), kEmpty);

  // Candidate cities per position.
  std::vector<std::vector<Index>> candidates(static_cast<std::size_t>(n));
  for (Index t = 0; t < n; ++t) {
    for (Index i = 0; i < n; ++i) {
      if (x[tsp_variable(n, t, i)]) candidates[t].push_back(i);
    }
    if (candidates[t].size() == 1) s[t] = candidates[t][0];
  }
  std::set<Index> unavailable;
  for (const Index c : s) {
    if (c != kEmpty) unavailable.insert(c);
  }

  // Ambiguous positions take a random city not yet unavailable.
  for (Index t = 0; t < n; ++t) {
    if (candidates[t].size() <= 1) continue;
    std::vector<Index> open;
    for (const Index c : candidates[t]) {
      if (!unavailable.count(c)) open.push_back(c);
    }
    if (open.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    s[t] = open[pick(rng)];
    unavailable.insert(s[t]);
  }

  // A city claimed by several positions stays on one of them, chosen at random.
  for (Index city = 0; city < n; ++city) {
    std::vector<Index> holders;
    for (Index t = 0; t < n; ++t) {
      if (s[t] == city) holders.push_back(t);
    }
    if (holders.size() <= 1) continue;
    fisher_yates(holders, rng);
    for (std::size_t h = 1; h < holders.size(); ++h) s[holders[h]] = kEmpty;
  }

  // Remaining positions draw from the cities nobody holds.
  std::vector<Index> left;
  for (Index city = 0; city < n; ++city) {
    if (!unavailable.count(city)) left.push_back(city);
  }
  for (Index t = 0; t < n; ++t) {
    if (s[t] != kEmpty) continue;
    std::uniform_int_distribution<std::size_t> pick(0, left.size() - 1);
    const std::size_t k = pick(rng);
    s[t] = left[k];
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return s;
}

Tour refine_tsp_solution(const Bits& x, const TspInstance& inst, Rng& rng) {
  return refine_tsp_solution(x, inst.size(), rng);
}

TspInstance read_tsp(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(reader.line_number(), "missing city count");
  auto fields = split_fields(line);
  if (fields.size() != 1) throw ParseError(reader.line_number(), "expected city count");
  const long n = parse_integer(fields[0], reader.line_number());
  if (n < 1) throw ParseError(reader.line_number(), "city count must be positive");
  Eigen::MatrixXd d(n, n);
  for (long r = 0; r < n; ++r) {
    if (!reader.next(line)) throw ParseError(reader.line_number(), "missing distance row");
    fields = split_fields(line);
    if (static_cast<long>(fields.size()) != n) {
      throw ParseError(reader.line_number(), "distance row needs " + std::to_string(n) + " values");
    }
    for (long c = 0; c < n; ++c) d(r, c) = parse_real(fields[c], reader.line_number());
  }
  if (reader.next(line)) throw ParseError(reader.line_number(), "unexpected trailing data");
  return TspInstance(std::move(d));
}

void write_tsp(std::ostream& out, const TspInstance& inst) {
  out << inst.size() << '\n';
  for (Index r = 0; r < inst.size(); ++r) {
    for (Index c = 0; c < inst.size(); ++c) {
      if (c) out << ' ';
      out << format_real(inst(r, c));
    }
    out << '\n';
  }
}

std::string format_tour(const Tour& tour) {
  std::ostringstream out;
  for (std::size_t t = 0; t < tour.size(); ++t) {
    if (t) out << ' ';
    out << tour[t];
  }
  return out.str();
}

}  // namespace qals
