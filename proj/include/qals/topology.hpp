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
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qals/qubo.hpp"

namespace qals {

using Edge = std::pair<int, int>;

/// Sampler hardware graph: active node ids (not necessarily contiguous, so
/// inactive qubits are simply absent) and the couplers between them.
/// Nodes and edges are kept sorted; every edge is stored with first < second.
class Topology {
 public:
  Topology() = default;
  Topology(std::vector<int> nodes, std::vector<Edge> edges);

  const std::vector<int>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool contains(int node) const { return index_.count(node) != 0; }
  bool has_edge(int u, int v) const;
  const std::vector<int>& neighbors(int node) const;
  std::size_t degree(int node) const { return neighbors(node).size(); }

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  static std::uint64_t key(int u, int v);

  std::vector<int> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<int, std::size_t> index_;
  std::vector<std::vector<int>> adjacency_;
  std::unordered_set<std::uint64_t> edge_keys_;
};

/// The first n active nodes in ascending order and the topology edges whose
/// endpoints are both among them, expressed as positions 0..n-1.
struct ActiveRegion {
  std::vector<int> nodes;
  std::vector<std::pair<Index, Index>> edges;  // positions, first < second
};

ActiveRegion active_region(const Topology& t, Index n);

/// Result of placing QUBO variables on topology nodes.
/// `weights` carries node and coupler weights keyed by topology node id;
/// `node_index` says which QUBO variable each used node stands for.
struct EmbeddedProblem {
  Weights weights;
  std::map<int, Index> node_index;
};

/// One variable per node, variables 0..n-1 on the first n active nodes.
/// Pairs without a coupler are dropped.
EmbeddedProblem embed_naive(const Qubo& q, const Topology& t);

Topology complete_graph(int n);
Topology cycle_graph(int n);
/// Chimera C_m: m x m grid of K_{4,4} cells. Node id ((r*m + c)*2 + side)*4 + k,
/// side 0 couples vertically to the cell below, side 1 horizontally to the
/// cell on the right.
Topology chimera_graph(int m);

// Format: node count, one id per line, a line "E", then "u v" per edge.
// The short form "count" followed directly by "u v" lines implies ids
// 0..count-1.
Topology load_topology(std::istream& in);
Topology load_topology_file(const std::string& path);
void save_topology(std::ostream& out, const Topology& t);

}  // namespace qals
