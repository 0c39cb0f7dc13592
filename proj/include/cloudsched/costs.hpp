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

// Server running cost, job migration cost and the weighted per-slot
// penalty that the drift-plus-penalty schedulers trade against backlog.

#ifndef CLOUDSCHED_COSTS_HPP_
#define CLOUDSCHED_COSTS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cloudsched/cluster.hpp"
#include "cloudsched/types.hpp"

namespace cloudsched {

enum class CostModel { kAffine, kBinary };

CostModel parse_cost_model(const std::string& name);
std::string to_string(CostModel model);

struct CostParams {
  CostModel model = CostModel::kAffine;
  double c0 = 1.0;        // static cost per slot of an active server
  std::vector<double> c;  // dynamic cost per slot of one type-m VM
  double U = 0.0;         // migration weight
  double V = 0.0;         // server-cost weight
  double alpha = 0.5;     // bias exponent, offline schedulers only

  // Throws ConfigError unless all weights are >= 0, c has `types` entries
  // and 0 < alpha < 1.
  void validate(int types) const;
};

// c0 * 1{W != 0} + sum_m c_m W_m (affine) or c0 * 1{W != 0} (binary). The
// static term is charged only when the server hosts at least one VM.
double server_cost(const AggregateConfig& aggregate, const CostParams& p);
double server_cost(const ClassMatrix& config, const CostParams& p);

// Jobs preempted when moving from actual config `n_prev` (slot t - 1) to
// `next` (slot t), residual-size indexing:
//   sum_{m, s >= 2} (n_prev_{m,s} - next_{m,s-1})^+.
int64_t migration_cost(const ClassMatrix& n_prev, const ClassMatrix& next);

// Age-indexed counterpart:
//   sum_m sum_{a=0}^{S-2} (n_prev_{m,a} - z_prev_{m,a} - next_{m,a+1})^+.
int64_t migration_cost_age(const ClassMatrix& n_prev,
                           const ClassMatrix& z_prev,
                           const ClassMatrix& next);

// V * sum_l C1 + U * sum_l C2.
double penalty(std::span<const double> server_costs,
               std::span<const double> migration_costs, const CostParams& p);

}  // namespace cloudsched

#endif  // CLOUDSCHED_COSTS_HPP_
