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
#include <optional>
#include <vector>

#include "qals/error.hpp"
#include "qals/qubo.hpp"
#include "qals/sampler.hpp"
#include "qals/topology.hpp"

namespace qals {

/// Permutation of the n problem variables over the n selected sampler nodes.
/// `perm[i]` is the column holding the 1 in row i of the permutation matrix
/// P; `inverse[perm[i]] == i`. Node position a carries variable inverse[a],
/// so variable i sits on position perm[i].
class PermutationState {
 public:
  explicit PermutationState(std::vector<Index> perm);
  static PermutationState identity(Index n);

  const std::vector<Index>& perm() const noexcept { return perm_; }
  const std::vector<Index>& inverse() const noexcept { return inverse_; }
  Index size() const noexcept { return static_cast<Index>(perm_.size()); }

  friend bool operator==(const PermutationState& a, const PermutationState& b) {
    return a.perm_ == b.perm_;
  }

 private:
  std::vector<Index> perm_;
  std::vector<Index> inverse_;
};

/// Entry (a, b) of P^T M P, read through the inverse vector without forming
/// the permuted matrix.
template <typename Derived>
typename Derived::Scalar permuted_entry(const Eigen::MatrixBase<Derived>& m,
                                        const PermutationState& state, Index a, Index b) {
  return m(state.inverse()[a], state.inverse()[b]);
}

/// Each position is picked independently with probability p; the values at
/// the picked positions are rearranged among themselves by Fisher-Yates.
PermutationState perturb_permutation(const PermutationState& state, double p, Rng& rng);

/// Weights of P^T Q' P masked by the couplers among the selected nodes,
/// read straight from Q' through the inverse vector:
/// node weight at position a is Q'(inv[a], inv[a]) and the coupler between
/// positions a and b is the folded pair coefficient of (inv[a], inv[b]).
EmbeddedProblem project_weights(const Qubo& qprime, const ActiveRegion& region,
                                const PermutationState& state);
EmbeddedProblem project_weights(const Qubo& qprime, const Topology& t,
                                const PermutationState& state);

/// Positional map-back: z_back[i] = z[perm[i]].
Bits map_back(const Bits& positional, const PermutationState& state);
/// Map a sampler assignment back to variable order through the embedding.
Bits map_back(const Assignment& assignment, const EmbeddedProblem& embedded);

/// Accumulated tabu penalties S (symmetric, n x n) and balancing factor.
struct TabuState {
  Eigen::MatrixXd matrix;
  double lambda = 1.0;
  std::size_t updates = 0;

  static TabuState zero(Index n, double lambda);
};

/// z z^T - I + diag(z); with spin_form the candidate is first mapped to +-1.
Eigen::MatrixXd tabu_term(const Bits& z, bool spin_form = false);
TabuState tabu_update(TabuState tabu, const Bits& z, bool spin_form = false);
/// Canonical Q + lambda * S.
Qubo tabu_augmented(const Qubo& q, const TabuState& tabu);

/// Flip every bit independently with probability p.
Bits perturb_candidate(const Bits& z, double p, Rng& rng);

struct QalsParams {
  double p_delta = 0.1;
  double eta = 0.01;
  double q = 0.2;
  int N = 10;
  double lambda0 = 1.5;
  int k = 10;
  int n_max = 100;
  int d_min = 70;
  std::optional<int> i_max;  // required
  bool tabu_spin_form = false;
  // Divides f' - f* in the suboptimal acceptance exponent.
  double energy_scale = 1.0;

  void validate() const;

  static QalsParams npp_defaults(int i_max);
  static QalsParams tsp_defaults(int i_max);
};

enum class Outcome { kRepeat, kBetter, kWorseAccepted, kWorseRejected };

struct QalsIteration {
  int i = 0;
  double p = 0.0;
  double lambda = 0.0;  // after this iteration's update
  std::optional<double> f_prime;
  double f_star = 0.0;  // incumbent after this iteration
  double f_best = 0.0;  // best seen so far
  Outcome outcome = Outcome::kRepeat;
  bool perturbed = false;
  int e = 0;
  int d = 0;

  bool accepted() const noexcept {
    return outcome == Outcome::kBetter || outcome == Outcome::kWorseAccepted;
  }
};

struct QalsTrace {
  double f1 = 0.0;
  double f2 = 0.0;
  std::vector<QalsIteration> iterations;
};

struct QalsResult {
  Bits solution;  // best assignment seen
  double value = 0.0;
  Bits incumbent;  // z* when the loop stopped
  double incumbent_value = 0.0;
  bool converged = false;
  QalsTrace trace;
};

/// A sampler failure aborts the run; the trace up to that point is kept.
class QalsAborted : public Error {
 public:
  QalsAborted(const std::string& what, QalsTrace trace)
      : Error(what), trace_(std::move(trace)) {}
  const QalsTrace& trace() const noexcept { return trace_; }

 private:
  QalsTrace trace_;
};

/// Quantum Annealing Learning Search over a topology-restricted sampler.
///
/// Random draws, in order, per sampling step: the permutation perturbation
/// (one uniform per position, then the Fisher-Yates draws), then one uniform
/// deciding whether to perturb the candidate (followed by one uniform per bit
/// when it does), then one uniform for suboptimal acceptance when the
/// candidate is worse. The sampler keeps its own generator.
QalsResult run_qals(const Qubo& q, const Topology& t, Sampler& sampler,
                    const QalsParams& params, Rng& rng);

/// One JSON object per iteration:
/// {"i","p","lambda","f_prime","f_star","f_best","accepted","outcome","e","d"}.
void write_trace_jsonl(std::ostream& out, const QalsTrace& trace);

const char* to_string(Outcome outcome);

}  // namespace qals
