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

#include "qals/npp.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>

#include "qals/text.hpp"

namespace qals {

NppInstance::NppInstance(std::vector<std::int64_t> numbers) : numbers_(std::move(numbers)) {
  if (numbers_.empty()) throw Error("number partitioning instance is empty");
  for (const auto s : numbers_) {
    if (s < 1) throw Error("partition numbers must be positive");
    sum_ += s;
  }
}

Qubo npp_to_qubo(const NppInstance& inst) {
  const auto& s = inst.numbers();
  const Index n = static_cast<Index>(s.size());
  const double c = static_cast<double>(inst.sum());
  Qubo q(n);
  for (Index i = 0; i < n; ++i) {
    const double si = static_cast<double>(s[i]);
    q.add(i, i, si * (si - c));
    // Q_ij = Q_ji = s_i s_j, folded onto the upper triangle.
    for (Index j = i + 1; j < n; ++j) q.add(i, j, 2.0 * si * static_cast<double>(s[j]));
  }
  return q;
}

std::int64_t npp_diff(const NppInstance& inst, const Bits& x) {
  if (static_cast<std::size_t>(x.size()) != inst.size()) {
    throw DimensionError("partition length does not match the instance");
  }
  std::int64_t ones = 0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (x[static_cast<Index>(i)]) ones += inst.numbers()[i];
  }
  const std::int64_t diff = inst.sum() - 2 * ones;
  return diff < 0 ? -diff : diff;
}

Bits greedy_partition(const NppInstance& inst) {
  const auto& s = inst.numbers();
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  Bits x = Bits::Zero(static_cast<Index>(s.size()));
  std::int64_t sum1 = 0;
  std::int64_t sum0 = 0;
  for (const auto i : order) {
    if (sum1 <= sum0) {
      x[static_cast<Index>(i)] = 1;
      sum1 += s[i];
    } else {
      sum0 += s[i];
    }
  }
  return x;
}

std::int64_t kk_heuristic(const NppInstance& inst) {
  std::priority_queue<std::int64_t> heap(inst.numbers().begin(), inst.numbers().end());
  while (heap.size() > 1) {
    const auto a = heap.top();
    heap.pop();
    const auto b = heap.top();
    heap.pop();
    heap.push(a - b);
  }
  return heap.top();
}

namespace {

// Depth-first CKK. Every number on the working list is a node of a forest
// whose leaves are the original numbers; an internal node records whether its
// two children sit in the same subset (sum) or in opposite ones (difference).
class CkkSearch {
 public:
  CkkSearch(const NppInstance& inst, std::optional<std::uint64_t> budget)
      : inst_(inst), budget_(budget), floor_(inst.sum() % 2) {
    const auto n = inst.size();
    forest_.resize(n, {-1, -1, true});
    best_.partition = Bits::Zero(static_cast<Index>(n));
  }

  CkkResult run() {
    std::vector<Item> list;
    for (std::size_t i = 0; i < inst_.size(); ++i) {
      list.push_back({inst_.numbers()[i], static_cast<int>(i)});
    }
    std::stable_sort(list.begin(), list.end(),
                     [](const Item& a, const Item& b) { return a.value > b.value; });
    search(list, inst_.sum());
    best_.nodes = expanded_;
    return best_;
  }

 private:
  struct Item {
    std::int64_t value;
    int node;
  };
  struct Node {
    int left;
    int right;
    bool same;
  };

  bool done() const { return found_ && best_.difference <= floor_; }

  void search(const std::vector<Item>& list, std::int64_t total) {
    ++expanded_;
    if (budget_ && expanded_ > *budget_ && found_) {
      best_.truncated = true;
      stop_ = true;
      return;
    }
    const Item& a = list[0];
    const std::int64_t rest = total - a.value;
    if (a.value >= rest) {
      // Everything else goes opposite the largest number.
      record(a.value - rest, list);
      return;
    }
    const Item& b = list[1];
    std::vector<Item> next;
    next.reserve(list.size() - 1);

    forest_.push_back({a.node, b.node, false});
    const Item diff{a.value - b.value, static_cast<int>(forest_.size()) - 1};
    next.assign(list.begin() + 2, list.end());
    const auto pos = std::upper_bound(next.begin(), next.end(), diff,
                                      [](const Item& x, const Item& y) { return x.value > y.value; });
    next.insert(pos, diff);
    search(next, total - 2 * b.value);
    forest_.pop_back();
    if (done() || stop_) return;

    // KK is exact on four numbers or fewer.
    if (list.size() <= 4) return;
    forest_.push_back({a.node, b.node, true});
    next.clear();
    next.push_back({a.value + b.value, static_cast<int>(forest_.size()) - 1});
    next.insert(next.end(), list.begin() + 2, list.end());
    search(next, total);
    forest_.pop_back();
  }

  void record(std::int64_t residual, const std::vector<Item>& list) {
    if (found_ && residual >= best_.difference) return;
    found_ = true;
    best_.difference = residual;
    // Linear sign propagation from the roots down to the leaves.
    std::vector<std::pair<int, bool>> stack;
    stack.emplace_back(list[0].node, true);
    for (std::size_t i = 1; i < list.size(); ++i) stack.emplace_back(list[i].node, false);
    while (!stack.empty()) {
      const auto [node, side] = stack.back();
      stack.pop_back();
      const Node& nd = forest_[static_cast<std::size_t>(node)];
      if (nd.left < 0) {
        best_.partition[node] = side ? 1 : 0;
        continue;
      }
      stack.emplace_back(nd.left, side);
      stack.emplace_back(nd.right, nd.same ? side : !side);
    }
  }

  const NppInstance& inst_;
  std::optional<std::uint64_t> budget_;
  std::int64_t floor_;
  std::vector<Node> forest_;
  CkkResult best_;
  bool found_ = false;
  bool stop_ = false;
  std::uint64_t expanded_ = 0;
};

}  // namespace

CkkResult ckk_solve(const NppInstance& inst, std::optional<std::uint64_t> node_budget) {
  return CkkSearch(inst, node_budget).run();
}

NppInstance read_npp(std::istream& in) {
  LineReader reader(in);
  std::string line;
  std::vector<std::int64_t> numbers;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 1) throw ParseError(reader.line_number(), "expected one integer per line");
    const long v = parse_integer(fields[0], reader.line_number());
    if (v < 1) throw ParseError(reader.line_number(), "numbers must be positive");
    numbers.push_back(v);
  }
  if (numbers.empty()) throw ParseError(reader.line_number(), "no numbers in instance");
  return NppInstance(std::move(numbers));
}

void write_npp(std::ostream& out, const NppInstance& inst) {
  for (const auto s : inst.numbers()) out << s << '\n';
}

}  // namespace qals
