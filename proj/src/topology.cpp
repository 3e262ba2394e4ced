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

#include "qals/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "qals/text.hpp"

namespace qals {

Topology::Topology(std::vector<int> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw Error("duplicate node id in topology");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);
  adjacency_.resize(nodes_.size());
  for (auto& [u, v] : edges_) {
    if (u == v) throw Error("self-loop on node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!contains(u) || !contains(v)) {
      throw Error("edge " + std::to_string(u) + "-" + std::to_string(v) +
                  " references an unknown node");
    }
    if (!edge_keys_.insert(key(u, v)).second) {
      throw Error("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    adjacency_[index_.at(u)].push_back(v);
    adjacency_[index_.at(v)].push_back(u);
  }
  std::sort(edges_.begin(), edges_.end());
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

std::uint64_t Topology::key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

bool Topology::has_edge(int u, int v) const {
  return u != v && edge_keys_.count(key(u, v)) != 0;
}

const std::vector<int>& Topology::neighbors(int node) const {
  const auto it = index_.find(node);
  if (it == index_.end()) throw Error("node " + std::to_string(node) + " not in topology");
  return adjacency_[it->second];
}

ActiveRegion active_region(const Topology& t, Index n) {
  if (n < 0 || static_cast<std::size_t>(n) > t.node_count()) {
    throw DimensionError("problem needs " + std::to_string(n) +
                         " nodes but the topology has " +
                         std::to_string(t.node_count()));
  }
  ActiveRegion region;
  region.nodes.assign(t.nodes().begin(), t.nodes().begin() + n);
  const int last = n > 0 ? region.nodes.back() : 0;
  // Edges are sorted by first endpoint and nodes ascend, so positions follow
  // from a binary search in the selected prefix.
  auto position = [&](int node) -> Index {
    const auto it = std::lower_bound(region.nodes.begin(), region.nodes.end(), node);
    return it - region.nodes.begin();
  };
  for (const auto& [u, v] : t.edges()) {
    if (n == 0 || u > last) break;
    if (v > last) continue;
    region.edges.emplace_back(position(u), position(v));
  }
  return region;
}

EmbeddedProblem embed_naive(const Qubo& q, const Topology& t) {
  const ActiveRegion region = active_region(t, q.size());
  EmbeddedProblem out;
  for (Index i = 0; i < q.size(); ++i) {
    const int node = region.nodes[i];
    out.node_index[node] = i;
    out.weights.linear[node] = q(i, i);
  }
  for (const auto& [a, b] : region.edges) {
    out.weights.quadratic[{region.nodes[a], region.nodes[b]}] = q(a, b);
  }
  return out;
}

Topology complete_graph(int n) {
  if (n < 1) throw Error("complete graph needs at least one node");
  std::vector<int> nodes(n);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    nodes[i] = i;
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Topology(std::move(nodes), std::move(edges));
}

Topology cycle_graph(int n) {
  if (n < 3) throw Error("cycle graph needs at least three nodes");
  std::vector<int> nodes(n);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    nodes[i] = i;
    edges.emplace_back(i, (i + 1) % n);
  }
  return Topology(std::move(nodes), std::move(edges));
}

Topology chimera_graph(int m) {
  if (m < 1) throw Error("chimera grid size must be at least 1");
  auto id = [m](int r, int c, int side, int k) { return ((r * m + c) * 2 + side) * 4 + k; };
  std::vector<int> nodes(static_cast<std::size_t>(8) * m * m);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) edges.emplace_back(id(r, c, 0, k), id(r, c, 1, l));
        if (r + 1 < m) edges.emplace_back(id(r, c, 0, k), id(r + 1, c, 0, k));
        if (c + 1 < m) edges.emplace_back(id(r, c, 1, k), id(r, c + 1, 1, k));
      }
    }
  }
  return Topology(std::move(nodes), std::move(edges));
}

Topology load_topology(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(reader.line_number(), "missing node count");
  auto fields = split_fields(line);
  if (fields.size() != 1) throw ParseError(reader.line_number(), "expected node count");
  const long count = parse_integer(fields[0], reader.line_number());
  if (count < 0) throw ParseError(reader.line_number(), "negative node count");

  std::vector<int> nodes;
  std::vector<Edge> edges;
  std::unordered_set<int> seen_nodes;
  std::unordered_set<std::uint64_t> seen_edges;

  auto read_edge = [&](const std::vector<std::string_view>& f) {
    if (f.size() != 2) throw ParseError(reader.line_number(), "expected 'u v'");
    int u = static_cast<int>(parse_integer(f[0], reader.line_number()));
    int v = static_cast<int>(parse_integer(f[1], reader.line_number()));
    if (u == v) throw ParseError(reader.line_number(), "self-loop");
    if (!seen_nodes.count(u) || !seen_nodes.count(v)) {
      throw ParseError(reader.line_number(), "edge endpoint is not a listed node");
    }
    if (u > v) std::swap(u, v);
    const auto k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
                   static_cast<std::uint32_t>(v);
    if (!seen_edges.insert(k).second) throw ParseError(reader.line_number(), "duplicate edge");
    edges.emplace_back(u, v);
  };

  bool have_line = reader.next(line);
  if (have_line) fields = split_fields(line);
  if (!have_line || fields.size() == 2) {
    // Short form: ids 0..count-1, edges follow immediately.
    for (int i = 0; i < count; ++i) {
      nodes.push_back(i);
      seen_nodes.insert(i);
    }
    while (have_line) {
      read_edge(split_fields(line));
      have_line = reader.next(line);
    }
    return Topology(std::move(nodes), std::move(edges));
  }

  for (long i = 0; i < count; ++i) {
    if (i > 0) {
      if (!reader.next(line)) throw ParseError(reader.line_number(), "fewer node lines than declared");
      fields = split_fields(line);
    }
    if (fields.size() != 1 || fields[0] == "E") {
      throw ParseError(reader.line_number(), "expected a node id");
    }
    const int node = static_cast<int>(parse_integer(fields[0], reader.line_number()));
    if (!seen_nodes.insert(node).second) throw ParseError(reader.line_number(), "duplicate node");
    nodes.push_back(node);
  }
  if (count == 0 || reader.next(line)) {
    fields = split_fields(line);
    if (fields.size() != 1 || fields[0] != "E") {
      throw ParseError(reader.line_number(), "expected edge marker 'E'");
    }
  } else {
    throw ParseError(reader.line_number(), "missing edge marker 'E'");
  }
  while (reader.next(line)) read_edge(split_fields(line));
  return Topology(std::move(nodes), std::move(edges));
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open topology file " + path);
  return load_topology(in);
}

void save_topology(std::ostream& out, const Topology& t) {
  out << t.node_count() << '\n';
  for (int node : t.nodes()) out << node << '\n';
  out << "E\n";
  for (const auto& [u, v] : t.edges()) out << u << ' ' << v << '\n';
}

}  // namespace qals
