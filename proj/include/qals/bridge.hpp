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
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

#include "qals/sampler.hpp"

namespace qals {

// Line protocol spoken with an external sampler process.
//
// Request (parent -> child stdin): for every node weight, and every nonzero
// coupler weight, three lines "row", "col", "value"; then a line "#".
// Node weights use row == col. Values are written in shortest round-trip
// decimal form.
// Response (child stdout): one line "0" or "1" per distinct node in the
// request, ascending by node id.
namespace wire {

struct Triplet {
  int row;
  int col;
  double value;
};

std::vector<Triplet> request_triplets(const Weights& weights);
std::string encode_request(const Weights& weights);
// Distinct nodes of the transmitted triplets, ascending.
std::vector<int> response_nodes(const std::vector<Triplet>& triplets);

}  // namespace wire

/// Parent side of the line protocol. The child is started once through
/// `/bin/sh -c command` and serves requests until the pipe is closed. Any
/// transport failure stops the child; later requests fail immediately.
class BridgeSampler final : public Sampler {
 public:
  explicit BridgeSampler(std::string command,
                         std::chrono::milliseconds timeout = std::chrono::seconds(60));
  ~BridgeSampler() override;

  BridgeSampler(const BridgeSampler&) = delete;
  BridgeSampler& operator=(const BridgeSampler&) = delete;

  SampleResult sample(const SamplerRequest& request) override;
  std::string name() const override { return "bridge"; }

 private:
  void start();
  void stop() noexcept;
  SampleResult exchange(const SamplerRequest& request);
  void write_all(std::string_view data);
  bool read_line(std::string& line);

  std::string command_;
  std::chrono::milliseconds timeout_;
  pid_t child_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace qals
