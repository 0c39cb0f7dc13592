// Copyright 2026 The cloudsched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Per-server argmax shared by every queue-aware scheduler.
//
// All four objectives depend on a class-resolved config N only through
//   W_m = sum_j N_{m,j}                 (aggregate VM counts)
//   k_m = sum_j (carry_{m,j} - N_{m,j})^+  (jobs of type m preempted)
// where carry is what the server could continue from the previous slot.
// The solver enumerates W over the feasible set and k over the values
// each type can reach, and resolves the class split with a small DP that
// maximizes the tie-break sum_j q_{m,j} N_{m,j}. Remaining ties go to the
// lexicographically smallest N (row-major over types, then classes).

#ifndef CLOUDSCHED_SERVER_SOLVER_HPP_
#define CLOUDSCHED_SERVER_SOLVER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cloudsched/cluster.hpp"
#include "cloudsched/costs.hpp"
#include "cloudsched/types.hpp"

namespace cloudsched {

struct ServerObjective {
  enum class Kind {
    // sum_m w_m W_m - V C1(W) - U sum_m k_m
    kMigrationPenalty,
    // (1 + 1{bias_enabled and k == 0} * bias) * (sum_m w_m W_m - V C1(W))
    kBias,
    // sum_m w_m W_m - V C1(W) - (sum_m k_m w_m)^(1 - alpha)
    kPowerPenalty,
  };

  Kind kind = Kind::kMigrationPenalty;
  std::vector<double> weights;  // w_m, one per VM type
  CostParams costs;             // c0, c, U, V, alpha
  double bias = 0.0;            // 1 / F(Q(tau)) for kBias
  bool bias_enabled = false;    // false while H^l is empty

  // Terms are accumulated in a fixed order (types ascending, then the cost
  // term, then the migration term) so equal inputs give bit-equal scores.
  double score(const AggregateConfig& w, std::span<const int64_t> k) const;
};

struct ServerChoice {
  ClassMatrix config;
  double score = 0.0;
  int64_t tie = 0;                  // sum q_{m,j} N_{m,j}
  std::vector<int64_t> migrations;  // k_m
};

// Exact maximizer of `objective` over every class-resolved config whose
// aggregate lies in `configs`. `q` supplies the tie-break weights and
// `carry` the continuation base; both are types x S.
ServerChoice solve_server(const ConfigSet& configs, const ClassMatrix& q,
                          const ClassMatrix& carry,
                          const ServerObjective& objective);

// Test oracle. Scores every class-resolved config whose aggregate lies in
// `configs` (all compositions of each W_m over S classes, so nothing is
// pruned) and returns the maximizer under (score, tie, lexicographic)
// order. Throws std::length_error when more than `limit` configs would be
// scored.
using ConfigScore = std::function<double(const ClassMatrix&)>;

struct BruteForceResult {
  ClassMatrix config;
  double score = 0.0;
  int64_t tie = 0;
  std::size_t evaluated = 0;
};

BruteForceResult brute_force_argmax(const ConfigSet& configs, int max_size,
                                    const ClassMatrix& q,
                                    const ConfigScore& score,
                                    std::size_t limit = 2'000'000);

// Number of class-resolved configs brute_force_argmax would score.
std::size_t resolved_config_count(const ConfigSet& configs, int max_size);

}  // namespace cloudsched

#endif  // CLOUDSCHED_SERVER_SOLVER_HPP_
