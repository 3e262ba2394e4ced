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

#include "qals/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <unordered_map>

namespace qals {

namespace {

std::uint8_t lookup(const Assignment& x, int node) {
  const auto it = x.find(node);
  if (it == x.end()) throw Error("assignment has no value for node " + std::to_string(node));
  return it->second;
}

// Request weights re-indexed onto positions 0..n-1 of the sorted node list.
struct LocalProblem {
  std::vector<int> nodes;
  std::vector<double> linear;
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbors;
  std::vector<std::tuple<std::size_t, std::size_t, double>> couplers;

  explicit LocalProblem(const Weights& w) : nodes(w.nodes()) {
    std::unordered_map<int, std::size_t> pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) pos.emplace(nodes[i], i);
    linear.assign(nodes.size(), 0.0);
    neighbors.resize(nodes.size());
    for (const auto& [node, value] : w.linear) linear[pos.at(node)] += value;
    for (const auto& [key, value] : w.quadratic) {
      if (value == 0.0) continue;
      const std::size_t a = pos.at(key.first);
      const std::size_t b = pos.at(key.second);
      neighbors[a].emplace_back(b, value);
      neighbors[b].emplace_back(a, value);
      couplers.emplace_back(a, b, value);
    }
  }

  std::size_t size() const { return nodes.size(); }

  double energy(const std::vector<std::uint8_t>& x) const {
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i]) e += linear[i];
    }
    for (const auto& [a, b, value] : couplers) {
      if (x[a] && x[b]) e += value;
    }
    return e;
  }

  Assignment to_assignment(const std::vector<std::uint8_t>& x) const {
    Assignment out;
    for (std::size_t i = 0; i < x.size(); ++i) out.emplace_hint(out.end(), nodes[i], x[i]);
    return out;
  }
};

void random_state(Rng& rng, std::vector<std::uint8_t>& x) {
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i % 64 == 0) word = rng();
    x[i] = static_cast<std::uint8_t>(word & 1u);
    word >>= 1;
  }
}

}  // namespace

double evaluate_binary(const Weights& w, const Assignment& x) {
  double total = 0.0;
  for (const auto& [node, value] : w.linear) {
    if (lookup(x, node)) total += value;
  }
  for (const auto& [key, value] : w.quadratic) {
    if (lookup(x, key.first) && lookup(x, key.second)) total += value;
  }
  return total;
}

void validate_request(const SamplerRequest& request) {
  if (request.reads < 1) throw Error("sampler reads must be at least 1");
  auto finite = [](double v) { return std::isfinite(v); };
  for (const auto& [node, value] : request.weights.linear) {
    if (!finite(value)) throw Error("non-finite weight on node " + std::to_string(node));
  }
  for (const auto& [key, value] : request.weights.quadratic) {
    if (!finite(value)) throw Error("non-finite coupler weight");
  }
}

SampleResult ExhaustiveSampler::sample(const SamplerRequest& request) {
  validate_request(request);
  const LocalProblem local(request.weights);
  if (local.size() == 0) return {};
  Qubo q(static_cast<Index>(local.size()));
  for (std::size_t i = 0; i < local.size(); ++i) q.add(i, i, local.linear[i]);
  for (const auto& [a, b, value] : local.couplers) q.add(a, b, value);
  const Minimum best = brute_force(q, cap_);
  std::vector<std::uint8_t> x(best.x.data(), best.x.data() + best.x.size());
  SampleResult out{local.to_assignment(x), 0.0};
  out.energy = evaluate_binary(request.weights, out.assignment);
  return out;
}

void SaSchedule::validate() const {
  if (sweeps == 0) throw Error("annealing schedule needs at least one sweep");
  if (!(final_temperature > 0.0)) throw Error("final temperature must be positive");
  if (initial_temperature != 0.0 && initial_temperature < final_temperature) {
    throw Error("temperature ladder must be non-increasing");
  }
}

std::vector<double> SaSchedule::ladder(double max_abs_weight) const {
  validate();
  double hot = initial_temperature > 0.0 ? initial_temperature : 10.0 * max_abs_weight;
  hot = std::max(hot, final_temperature);
  std::vector<double> t(sweeps);
  if (sweeps == 1) {
    t[0] = final_temperature;
    return t;
  }
  const double ratio = final_temperature / hot;
  for (std::size_t s = 0; s < sweeps; ++s) {
    t[s] = hot * std::pow(ratio, static_cast<double>(s) / static_cast<double>(sweeps - 1));
  }
  return t;
}

SaSampler::SaSampler(std::shared_ptr<const Topology> topology, SaSchedule schedule,
                     std::uint64_t seed)
    : topology_(std::move(topology)), schedule_(schedule), rng_(seed) {
  schedule_.validate();
}

SampleResult SaSampler::sample(const SamplerRequest& request) {
  validate_request(request);
  if (topology_) {
    for (const auto& [node, value] : request.weights.linear) {
      if (!topology_->contains(node)) {
        throw Error("weight on node " + std::to_string(node) + " outside the topology");
      }
    }
    for (const auto& [key, value] : request.weights.quadratic) {
      if (!topology_->has_edge(key.first, key.second)) {
        throw Error("coupler " + std::to_string(key.first) + "-" +
                    std::to_string(key.second) + " is not a topology edge");
      }
    }
  }
  const LocalProblem local(request.weights);
  const std::size_t n = local.size();
  if (n == 0) return {};
  const std::vector<double> temperatures = schedule_.ladder(request.weights.max_abs());
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<std::uint8_t> x(n);
  std::vector<std::uint8_t> best;
  double best_energy = std::numeric_limits<double>::infinity();
  std::vector<double> field(n);
  for (int read = 0; read < request.reads; ++read) {
    random_state(rng_, x);
    for (std::size_t i = 0; i < n; ++i) {
      field[i] = local.linear[i];
      for (const auto& [j, w] : local.neighbors[i]) {
        if (x[j]) field[i] += w;
      }
    }
    for (const double temperature : temperatures) {
      const double beta = 1.0 / temperature;
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = x[i] ? -field[i] : field[i];
        // Uphill moves past exp(-40) are treated as rejected without a draw.
        if (delta > 0.0 && (delta * beta > 40.0 || uniform(rng_) >= std::exp(-delta * beta))) {
          continue;
        }
        x[i] ^= 1u;
        const double sign = x[i] ? 1.0 : -1.0;
        for (const auto& [j, w] : local.neighbors[i]) field[j] += sign * w;
      }
    }
    const double e = local.energy(x);
    if (e < best_energy) {
      best_energy = e;
      best = x;
    }
  }
  SampleResult out{local.to_assignment(best), 0.0};
  out.energy = evaluate_binary(request.weights, out.assignment);
  return out;
}

SampleResult RandomSampler::sample(const SamplerRequest& request) {
  validate_request(request);
  const LocalProblem local(request.weights);
  if (local.size() == 0) return {};
  std::vector<std::uint8_t> x(local.size());
  std::vector<std::uint8_t> best;
  double best_energy = std::numeric_limits<double>::infinity();
  for (int read = 0; read < request.reads; ++read) {
    random_state(rng_, x);
    const double e = local.energy(x);
    if (e < best_energy) {
      best_energy = e;
      best = x;
    }
  }
  SampleResult out{local.to_assignment(best), 0.0};
  out.energy = evaluate_binary(request.weights, out.assignment);
  return out;
}

std::vector<std::uint64_t> random_bits(Sampler& sampler, int bits, int width) {
  if (width < 1 || width > 63 || bits < width) {
    throw Error("random_bits needs bits >= width >= 1 and width <= 63");
  }
  SamplerRequest request;
  for (int i = 0; i < bits; ++i) request.weights.linear[i] = 0.0;
  const SampleResult result = sampler.sample(request);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(bits / width));
  for (std::size_t g = 0; g < out.size(); ++g) {
    std::uint64_t value = 0;
    for (int b = 0; b < width; ++b) {
      value = (value << 1) | lookup(result.assignment, static_cast<int>(g) * width + b);
    }
    out[g] = value;
  }
  return out;
}

}  // namespace qals
