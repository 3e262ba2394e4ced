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

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "qals/qubo.hpp"
#include "qals/random.hpp"
#include "qals/topology.hpp"

namespace qals {

using Assignment = std::map<int, std::uint8_t>;

struct SamplerRequest {
  Weights weights;  // binary (0/1) reading
  int reads = 1;
};

struct SampleResult {
  Assignment assignment;
  double energy = 0.0;
};

/// sum_u w_u x_u + sum_{u<v} w_uv x_u x_v. Every weighted node must be assigned.
double evaluate_binary(const Weights& w, const Assignment& x);

/// "Run the annealer k times, keep the best measurement."
/// A backend instance serves one caller at a time.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual SampleResult sample(const SamplerRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Global minimum by enumeration; ignores `reads`.
class ExhaustiveSampler final : public Sampler {
 public:
  explicit ExhaustiveSampler(int cap = kDefaultExhaustiveCap) : cap_(cap) {}
  SampleResult sample(const SamplerRequest& request) override;
  std::string name() const override { return "exhaustive"; }

 private:
  int cap_;
};

struct SaSchedule {
  std::size_t sweeps = 1000;
  // Hot end of the geometric ladder; 0 selects 10 * max |weight|.
  double initial_temperature = 0.0;
  double final_temperature = 0.1;

  void validate() const;
  std::vector<double> ladder(double max_abs_weight) const;
};

/// Single-spin-flip Metropolis annealing in 0/1 space. Each read is an
/// independent chain from a uniform random start; the lowest final state
/// wins. When a topology is given, requests must only weight its nodes and
/// couplers.
class SaSampler final : public Sampler {
 public:
  SaSampler(std::shared_ptr<const Topology> topology, SaSchedule schedule,
            std::uint64_t seed);
  SampleResult sample(const SamplerRequest& request) override;
  std::string name() const override { return "sa"; }

 private:
  std::shared_ptr<const Topology> topology_;
  SaSchedule schedule_;
  Rng rng_;
};

/// Best of `reads` uniformly random assignments.
class RandomSampler final : public Sampler {
 public:
  explicit RandomSampler(std::uint64_t seed) : rng_(seed) {}
  SampleResult sample(const SamplerRequest& request) override;
  std::string name() const override { return "random"; }

 private:
  Rng rng_;
};

/// Random integers from a sampler: submit an all-zero problem on nodes
/// 0..bits-1 and read the returned string as floor(bits / width) numbers of
/// `width` bits each, most significant bit first.
std::vector<std::uint64_t> random_bits(Sampler& sampler, int bits, int width);

void validate_request(const SamplerRequest& request);

}  // namespace qals
