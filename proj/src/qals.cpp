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

#include "qals/qals.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace qals {

PermutationState::PermutationState(std::vector<Index> perm)
    : perm_(std::move(perm)), inverse_(perm_.size(), -1) {
  const Index n = size();
  for (Index i = 0; i < n; ++i) {
    const Index v = perm_[i];
    if (v < 0 || v >= n || inverse_[v] != -1) throw Error("not a permutation of 0..n-1");
    inverse_[v] = i;
  }
}

PermutationState PermutationState::identity(Index n) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[i] = i;
  return PermutationState(std::move(perm));
}

PermutationState perturb_permutation(const PermutationState& state, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("shuffle probability must lie in [0, 1]");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<std::size_t> picked;
  for (std::size_t a = 0; a < state.perm().size(); ++a) {
    if (uniform(rng) < p) picked.push_back(a);
  }
  std::vector<Index> perm = state.perm();
  std::vector<Index> values;
  values.reserve(picked.size());
  for (std::size_t a : picked) values.push_back(perm[a]);
  fisher_yates(values, rng);
  for (std::size_t s = 0; s < picked.size(); ++s) perm[picked[s]] = values[s];
  return PermutationState(std::move(perm));
}

EmbeddedProblem project_weights(const Qubo& qprime, const ActiveRegion& region,
                                const PermutationState& state) {
  const Index n = qprime.size();
  if (state.size() != n) throw DimensionError("permutation size does not match the QUBO");
  if (static_cast<Index>(region.nodes.size()) != n) {
    throw DimensionError("active region size does not match the QUBO");
  }
  const auto& inv = state.inverse();
  EmbeddedProblem out;
  for (Index a = 0; a < n; ++a) {
    const int node = region.nodes[a];
    out.node_index.emplace_hint(out.node_index.end(), node, inv[a]);
    out.weights.linear.emplace_hint(out.weights.linear.end(), node, qprime(inv[a], inv[a]));
  }
  for (const auto& [a, b] : region.edges) {
    out.weights.quadratic.emplace(std::make_pair(region.nodes[a], region.nodes[b]),
                                  qprime(inv[a], inv[b]));
  }
  return out;
}

EmbeddedProblem project_weights(const Qubo& qprime, const Topology& t,
                                const PermutationState& state) {
  return project_weights(qprime, active_region(t, qprime.size()), state);
}

Bits map_back(const Bits& positional, const PermutationState& state) {
  if (positional.size() != state.size()) throw DimensionError("solution size does not match permutation");
  Bits out(state.size());
  for (Index i = 0; i < state.size(); ++i) out[i] = positional[state.perm()[i]];
  return out;
}

Bits map_back(const Assignment& assignment, const EmbeddedProblem& embedded) {
  Bits out = Bits::Zero(static_cast<Index>(embedded.node_index.size()));
  for (const auto& [node, variable] : embedded.node_index) {
    const auto it = assignment.find(node);
    if (it == assignment.end()) throw Error("sample has no value for node " + std::to_string(node));
    out[variable] = it->second;
  }
  return out;
}

TabuState TabuState::zero(Index n, double lambda) {
  return {Eigen::MatrixXd::Zero(n, n), lambda, 0};
}

Eigen::MatrixXd tabu_term(const Bits& z, bool spin_form) {
  Eigen::VectorXd v = z.cast<double>();
  if (spin_form) v = 2.0 * v.array() - 1.0;
  Eigen::MatrixXd term = v * v.transpose();
  term.diagonal() += v - Eigen::VectorXd::Ones(v.size());
  return term;
}

TabuState tabu_update(TabuState tabu, const Bits& z, bool spin_form) {
  if (z.size() != tabu.matrix.rows()) throw DimensionError("candidate size does not match tabu matrix");
  tabu.matrix += tabu_term(z, spin_form);
  ++tabu.updates;
  return tabu;
}

Qubo tabu_augmented(const Qubo& q, const TabuState& tabu) {
  const Index n = q.size();
  if (tabu.matrix.rows() != n || tabu.matrix.cols() != n) {
    throw DimensionError("tabu matrix size does not match the QUBO");
  }
  Qubo out = q;
  if (tabu.lambda == 0.0 || tabu.updates == 0) return out;
  const auto& s = tabu.matrix;
  for (Index j = 0; j < n; ++j) {
    out.add(j, j, tabu.lambda * s(j, j));
    for (Index i = 0; i < j; ++i) {
      const double v = s(i, j) + s(j, i);
      if (v != 0.0) out.add(i, j, tabu.lambda * v);
    }
  }
  return out;
}

Bits perturb_candidate(const Bits& z, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("flip probability must lie in [0, 1]");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Bits out = z;
  for (Index i = 0; i < out.size(); ++i) {
    if (uniform(rng) < p) out[i] ^= 1u;
  }
  return out;
}

void QalsParams::validate() const {
  if (!(p_delta > 0.0 && p_delta < 0.5)) throw Error("p_delta must lie in (0, 0.5)");
  if (!(eta > 0.0 && eta <= 1.0)) throw Error("eta must lie in (0, 1]");
  if (!(q > 0.0 && q <= 1.0)) throw Error("q must lie in (0, 1]");
  if (N < 1) throw Error("N must be positive");
  if (!(lambda0 > 0.0)) throw Error("lambda0 must be positive");
  if (k < 1) throw Error("k must be positive");
  if (n_max < 1 || d_min < 1) throw Error("n_max and d_min must be positive");
  if (!i_max) throw Error("i_max is required");
  if (*i_max < 0) throw Error("i_max must not be negative");
  if (!(energy_scale > 0.0)) throw Error("energy_scale must be positive");
}

QalsParams QalsParams::npp_defaults(int i_max) {
  QalsParams p;
  p.i_max = i_max;
  return p;
}

QalsParams QalsParams::tsp_defaults(int i_max) {
  QalsParams p;
  p.eta = 0.2;
  p.N = 5;
  p.k = 5;
  p.i_max = i_max;
  return p;
}

QalsResult run_qals(const Qubo& q, const Topology& t, Sampler& sampler,
                    const QalsParams& params, Rng& rng) {
  params.validate();
  const Index n = q.size();
  const ActiveRegion region = active_region(t, n);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  QalsTrace trace;

  auto draw = [&](const Qubo& qprime, const PermutationState& m) {
    const EmbeddedProblem embedded = project_weights(qprime, region, m);
    SampleResult result;
    try {
      result = sampler.sample({embedded.weights, params.k});
    } catch (const Error& e) {
      throw QalsAborted(std::string("sampler failed: ") + e.what(), trace);
    }
    return map_back(result.assignment, embedded);
  };

  double p = 1.0;
  const PermutationState m1 = perturb_permutation(PermutationState::identity(n), p, rng);
  const PermutationState m2 = perturb_permutation(PermutationState::identity(n), p, rng);
  Bits z1 = draw(q, m1);
  Bits z2 = draw(q, m2);
  const double f1 = evaluate(q, z1);
  const double f2 = evaluate(q, z2);
  trace.f1 = f1;
  trace.f2 = f2;

  const bool first = f1 < f2;
  Bits z_star = first ? z1 : z2;
  double f_star = first ? f1 : f2;
  PermutationState m_star = first ? m1 : m2;
  const Bits& z_worse = first ? z2 : z1;

  TabuState tabu = TabuState::zero(n, params.lambda0);
  if (f1 != f2) tabu = tabu_update(std::move(tabu), z_worse, params.tabu_spin_form);

  Bits best = z_star;
  double f_best = f_star;
  int e = 0;
  int d = 0;
  int i = 0;
  const int i_max = *params.i_max;
  bool converged = false;

  while (i != i_max) {
    if (e + d >= params.n_max && d < params.d_min) {
      converged = true;
      break;
    }
    const Qubo qprime = tabu_augmented(q, tabu);
    if (i % params.N == 0) p -= params.eta * (p - params.p_delta);

    const PermutationState m = perturb_permutation(m_star, p, rng);
    Bits candidate = draw(qprime, m);

    QalsIteration rec;
    rec.i = i;
    rec.p = p;
    if (uniform(rng) < params.q) {
      candidate = perturb_candidate(candidate, p, rng);
      rec.perturbed = true;
    }

    if (candidate != z_star) {
      const double f_prime = evaluate(q, candidate);
      rec.f_prime = f_prime;
      if (f_prime < f_star) {
        std::swap(candidate, z_star);
        f_star = f_prime;
        m_star = m;
        e = 0;
        d = 0;
        // `candidate` now holds the displaced incumbent.
        tabu = tabu_update(std::move(tabu), candidate, params.tabu_spin_form);
        rec.outcome = Outcome::kBetter;
        if (f_star < f_best) {
          best = z_star;
          f_best = f_star;
        }
      } else {
        ++d;
        const double exponent = (f_prime - f_star) / params.energy_scale;
        const double accept = std::clamp(std::pow(p - params.p_delta, exponent), 0.0, 1.0);
        if (uniform(rng) < accept) {
          std::swap(candidate, z_star);
          f_star = f_prime;
          m_star = m;
          e = 0;
          rec.outcome = Outcome::kWorseAccepted;
        } else {
          rec.outcome = Outcome::kWorseRejected;
        }
      }
      tabu.lambda = std::min(params.lambda0, params.lambda0 / (2.0 + i - e));
    } else {
      ++e;
      rec.outcome = Outcome::kRepeat;
    }
    ++i;

    rec.lambda = tabu.lambda;
    rec.f_star = f_star;
    rec.f_best = f_best;
    rec.e = e;
    rec.d = d;
    trace.iterations.push_back(rec);
  }

  QalsResult out;
  out.solution = std::move(best);
  out.value = f_best;
  out.incumbent = std::move(z_star);
  out.incumbent_value = f_star;
  out.converged = converged;
  out.trace = std::move(trace);
  return out;
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kRepeat: return "repeat";
    case Outcome::kBetter: return "better";
    case Outcome::kWorseAccepted: return "worse_accepted";
    case Outcome::kWorseRejected: return "worse_rejected";
  }
  return "unknown";
}

void write_trace_jsonl(std::ostream& out, const QalsTrace& trace) {
  for (const auto& it : trace.iterations) {
    nlohmann::json j;
    j["i"] = it.i;
    j["p"] = it.p;
    j["lambda"] = it.lambda;
    j["f_prime"] = it.f_prime ? nlohmann::json(*it.f_prime) : nlohmann::json(nullptr);
    j["f_star"] = it.f_star;
    j["f_best"] = it.f_best;
    j["accepted"] = it.accepted();
    j["outcome"] = to_string(it.outcome);
    j["perturbed"] = it.perturbed;
    j["e"] = it.e;
    j["d"] = it.d;
    out << j.dump() << '\n';
  }
}

}  // namespace qals
