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

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qals/error.hpp"

namespace qals {

using Index = Eigen::Index;

// Assignment over {0,1}, one entry per variable.
using Bits = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;
// Assignment over {-1,+1}, one entry per variable.
using Spins = Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1>;

inline constexpr int kDefaultExhaustiveCap = 24;

/// Dense QUBO coefficient matrix of order n kept in canonical upper-triangular
/// form: every coefficient of the pair {i, j} lives at (min(i,j), max(i,j)).
///
/// Constructing from an arbitrary square matrix folds the strictly lower
/// triangle onto the upper one, which leaves x^T Q x unchanged for binary x.
template <typename Scalar>
class BasicQubo {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit BasicQubo(Index n) : coeffs_(Matrix::Zero(check_order(n), n)) {}

  template <typename Derived>
  explicit BasicQubo(const Eigen::MatrixBase<Derived>& m)
      : coeffs_(Matrix::Zero(check_order(m.rows()), m.rows())) {
    if (m.rows() != m.cols()) {
      throw DimensionError("QUBO matrix must be square");
    }
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        add(i, j, static_cast<Scalar>(m(i, j)));
      }
    }
  }

  Index size() const noexcept { return coeffs_.rows(); }
  const Matrix& coeffs() const noexcept { return coeffs_; }

  // Coefficient of x_i x_j (or of x_i when i == j) regardless of order.
  Scalar operator()(Index i, Index j) const {
    return i <= j ? coeffs_(i, j) : coeffs_(j, i);
  }

  void add(Index i, Index j, Scalar value) {
    if (!std::isfinite(static_cast<double>(value))) {
      throw Error("QUBO coefficients must be finite");
    }
    if (i > j) std::swap(i, j);
    coeffs_(i, j) += value;
  }

  void set(Index i, Index j, Scalar value) {
    if (i > j) std::swap(i, j);
    coeffs_(i, j) = Scalar(0);
    add(i, j, value);
  }

  friend bool operator==(const BasicQubo& a, const BasicQubo& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  static Index check_order(Index n) {
    if (n < 1) throw DimensionError("QUBO order must be at least 1");
    return n;
  }

  Matrix coeffs_;
};

using Qubo = BasicQubo<double>;

/// Sparse weights over node identifiers: per-node terms and per-pair terms.
/// The same shape serves as Ising fields/couplings (spin reading) and as the
/// binary weight map submitted to a sampler (0/1 reading).
template <typename Scalar>
struct BasicWeights {
  using Pair = std::pair<int, int>;

  std::map<int, Scalar> linear;
  std::map<Pair, Scalar> quadratic;  // keys ordered with first < second

  void add_linear(int node, Scalar value) { linear[node] += value; }

  void add_quadratic(int u, int v, Scalar value) {
    if (u == v) throw Error("quadratic weight on a self pair");
    if (u > v) std::swap(u, v);
    quadratic[{u, v}] += value;
  }

  // Sorted distinct nodes referenced by any term.
  std::vector<int> nodes() const {
    std::vector<int> out;
    out.reserve(linear.size() + 2 * quadratic.size());
    for (const auto& [node, value] : linear) out.push_back(node);
    for (const auto& [key, value] : quadratic) {
      out.push_back(key.first);
      out.push_back(key.second);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Scalar max_abs() const {
    Scalar m(0);
    for (const auto& [node, value] : linear) m = std::max(m, std::abs(value));
    for (const auto& [key, value] : quadratic) m = std::max(m, std::abs(value));
    return m;
  }

  bool empty() const noexcept { return linear.empty() && quadratic.empty(); }
};

using Weights = BasicWeights<double>;
using IsingWeights = BasicWeights<double>;

template <typename Scalar>
struct BasicMinimum {
  Bits x;
  Scalar value;
};

using Minimum = BasicMinimum<double>;

template <typename Scalar>
struct BasicIsingForm {
  BasicWeights<Scalar> weights;
  Scalar offset;
};

using IsingForm = BasicIsingForm<double>;

inline bool lexicographically_less(const Bits& a, const Bits& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

inline bool is_binary(const Bits& x) {
  return std::all_of(x.data(), x.data() + x.size(),
                     [](std::uint8_t b) { return b <= 1; });
}

inline Spins to_spins(const Bits& x) {
  return (x.cast<std::int8_t>() * std::int8_t(2)).array() - std::int8_t(1);
}

inline Bits to_bits(const Spins& z) {
  return ((z.array() + std::int8_t(1)) / std::int8_t(2)).cast<std::uint8_t>();
}

/// x^T Q x, summed over the coefficients touched by the set bits.
template <typename Scalar>
Scalar evaluate(const BasicQubo<Scalar>& q, const Bits& x) {
  if (x.size() != q.size()) {
    throw DimensionError("assignment length " + std::to_string(x.size()) +
                         " does not match QUBO order " +
                         std::to_string(q.size()));
  }
  if (!is_binary(x)) throw Error("assignment entries must be 0 or 1");
  std::vector<Index> ones;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i]) ones.push_back(i);
  }
  const auto& c = q.coeffs();
  Scalar total(0);
  for (std::size_t a = 0; a < ones.size(); ++a) {
    for (std::size_t b = a; b < ones.size(); ++b) total += c(ones[a], ones[b]);
  }
  return total;
}

/// sum_i theta_i z_i + sum_{i<j} theta_ij z_i z_j with z indexed by node id.
/// Nodes without an entry in z are an error; missing weights count as zero.
template <typename Scalar>
Scalar evaluate_ising(const BasicWeights<Scalar>& w, const Spins& z) {
  for (Index i = 0; i < z.size(); ++i) {
    if (z[i] != 1 && z[i] != -1) {
      throw Error("spin at index " + std::to_string(i) + " is not -1 or +1");
    }
  }
  auto spin = [&](int node) -> Scalar {
    if (node < 0 || node >= z.size()) {
      throw DimensionError("no spin for node " + std::to_string(node));
    }
    return static_cast<Scalar>(z[node]);
  };
  Scalar total(0);
  for (const auto& [node, theta] : w.linear) total += theta * spin(node);
  for (const auto& [key, theta] : w.quadratic) {
    total += theta * spin(key.first) * spin(key.second);
  }
  return total;
}

/// Exhaustive minimisation over all 2^n assignments. Among minimisers the
/// lexicographically smallest bit string wins. Enumeration follows a Gray
/// code with incremental local fields; near-ties are settled on exactly
/// re-evaluated energies so the answer is independent of accumulated rounding.
template <typename Scalar>
BasicMinimum<Scalar> brute_force(const BasicQubo<Scalar>& q,
                                 int cap = kDefaultExhaustiveCap) {
  const Index n = q.size();
  if (n > cap) {
    throw CapacityError("exhaustive search over " + std::to_string(n) +
                        " variables exceeds cap " + std::to_string(cap));
  }
  const auto& c = q.coeffs();
  // field(k) = Q_kk + sum_{j != k} Q_{kj} x_j over the folded pair coefficients.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> field = c.diagonal();
  Bits x = Bits::Zero(n);
  Bits best = x;
  Scalar running(0);
  Scalar best_value(0);

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int k = std::countr_zero(step);
    const Scalar delta = x[k] ? -field[k] : field[k];
    running += delta;
    x[k] ^= 1;
    const Scalar sign = x[k] ? Scalar(1) : Scalar(-1);
    for (Index j = 0; j < n; ++j) {
      if (j != k) field[j] += sign * q(j, k);
    }
    const Scalar tol =
        Scalar(1e-9) * (Scalar(1) + std::abs(best_value) + std::abs(running));
    if (running < best_value - tol) {
      best = x;
      best_value = evaluate(q, x);
      running = best_value;
    } else if (running <= best_value + tol &&
               (running < best_value || lexicographically_less(x, best))) {
      const Scalar exact = evaluate(q, x);
      if (exact < best_value ||
          (exact == best_value && lexicographically_less(x, best))) {
        best = x;
        best_value = exact;
      }
      running = exact;
    }
  }
  return {best, evaluate(q, best)};
}

/// Affine change of variables x = (z + 1) / 2. For every binary x and its
/// spin image z: evaluate(q, x) == evaluate_ising(form.weights, z) + offset.
/// With all_pairs set, every pair i < j gets a coupling entry even when zero.
template <typename Scalar>
BasicIsingForm<Scalar> qubo_to_ising(const BasicQubo<Scalar>& q,
                                     bool all_pairs = false) {
  const Index n = q.size();
  BasicIsingForm<Scalar> out{{}, Scalar(0)};
  const auto& c = q.coeffs();
  for (Index i = 0; i < n; ++i) {
    Scalar h = c(i, i) / Scalar(2);
    out.offset += c(i, i) / Scalar(2);
    for (Index j = 0; j < n; ++j) {
      if (j != i) h += q(i, j) / Scalar(4);
    }
    out.weights.linear[static_cast<int>(i)] = h;
    for (Index j = i + 1; j < n; ++j) {
      const Scalar v = c(i, j);
      out.offset += v / Scalar(4);
      if (v != Scalar(0) || all_pairs) {
        out.weights.quadratic[{static_cast<int>(i), static_cast<int>(j)}] =
            v / Scalar(4);
      }
    }
  }
  return out;
}

// Text format: first line n, then "i j value" per nonzero entry with i <= j.
// Lines starting with '#' are comments.
Qubo read_qubo(std::istream& in);
void write_qubo(std::ostream& out, const Qubo& q);

std::string format_bits(const Bits& x);
Bits parse_bits(const std::string& text);

}  // namespace qals
