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

// Replays a finished QALS trace against the schedule and counter rules and
// lists every violation found.

#include <algorithm>
#include <string>
#include <vector>

#include "qals/qals.hpp"

namespace laws {

inline std::vector<std::string> trace_violations(const qals::QalsTrace& trace,
                                                 const qals::QalsParams& params,
                                                 const qals::QalsResult& result,
                                                 const qals::Qubo& q) {
  using qals::Outcome;
  std::vector<std::string> bad;
  auto fail = [&](int i, const std::string& what) {
    bad.push_back("iteration " + std::to_string(i) + ": " + what);
  };
  double p_prev = 1.0;
  double lambda_prev = params.lambda0;
  double f_star = std::min(trace.f1, trace.f2);
  double f_best = f_star;
  double f_best_prev = f_best;
  int e = 0;
  int d = 0;
  for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
    const auto& it = trace.iterations[k];
    const int i = it.i;
    if (i != static_cast<int>(k)) fail(i, "iteration index out of sequence");
    if (it.p > p_prev) fail(i, "p increased");
    if (it.p < params.p_delta - 1e-12) fail(i, "p fell below p_delta");
    if (i % params.N != 0 && it.p != p_prev) fail(i, "p changed off schedule");
    if (it.lambda > params.lambda0) fail(i, "lambda above lambda0");
    if (it.e < 0 || it.d < 0) fail(i, "negative counter");
    const bool has_f = it.f_prime.has_value();
    switch (it.outcome) {
      case Outcome::kRepeat:
        if (has_f) fail(i, "repeat carries a candidate value");
        if (it.lambda != lambda_prev) fail(i, "lambda changed on a repeat");
        ++e;
        break;
      case Outcome::kBetter:
        if (!has_f || !(*it.f_prime < f_star)) {
          fail(i, "better candidate not strictly below f*");
          break;
        }
        f_star = *it.f_prime;
        f_best = std::min(f_best, f_star);
        e = 0;
        d = 0;
        break;
      case Outcome::kWorseAccepted:
      case Outcome::kWorseRejected:
        if (!has_f || *it.f_prime < f_star) {
          fail(i, "worse candidate below f*");
          break;
        }
        if (it.outcome == Outcome::kWorseAccepted) {
          f_star = *it.f_prime;
          e = 0;
        }
        ++d;
        break;
    }
    if (has_f && it.lambda != std::min(params.lambda0, params.lambda0 / (2.0 + i - it.e))) {
      fail(i, "lambda does not follow min(lambda0, lambda0 / (2 + i - e))");
    }
    if (it.e != e || it.d != d) fail(i, "counters disagree with the outcomes");
    if (it.f_star != f_star) fail(i, "incumbent value disagrees with the outcomes");
    if (it.f_best != f_best) fail(i, "best value is not the minimum over improving candidates");
    if (it.f_best > f_best_prev) fail(i, "best value increased");
    p_prev = it.p;
    lambda_prev = it.lambda;
    f_best_prev = it.f_best;
  }
  if (result.value != f_best) bad.push_back("returned value is not the trace minimum");
  if (qals::evaluate(q, result.solution) != result.value) {
    bad.push_back("returned solution does not evaluate to the returned value");
  }
  if (result.incumbent_value != f_star || qals::evaluate(q, result.incumbent) != f_star) {
    bad.push_back("final incumbent disagrees with the trace");
  }
  return bad;
}

// Identical traces, field by field.
inline bool same_trace(const qals::QalsTrace& a, const qals::QalsTrace& b) {
  if (a.f1 != b.f1 || a.f2 != b.f2 || a.iterations.size() != b.iterations.size()) return false;
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    const auto& x = a.iterations[k];
    const auto& y = b.iterations[k];
    if (x.i != y.i || x.p != y.p || x.lambda != y.lambda || x.f_prime != y.f_prime ||
        x.f_star != y.f_star || x.f_best != y.f_best || x.outcome != y.outcome ||
        x.perturbed != y.perturbed || x.e != y.e || x.d != y.d) {
      return false;
    }
  }
  return true;
}

}  // namespace laws
