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

// Static randomized policies: the cheapest server mixture that carries a
// given workload, the edge of the capacity region along a direction, and
// the closed-form constants of the scheduler performance bounds.
//
// Both LPs are posed over aggregate configs. Servers that share a feasible
// set are pooled: a mixture over the set with total mass equal to the
// number of such servers, split evenly afterwards.

#ifndef CLOUDSCHED_OPTIMUM_HPP_
#define CLOUDSCHED_OPTIMUM_HPP_

#include <vector>

#include "cloudsched/cluster.hpp"
#include "cloudsched/costs.hpp"
#include "cloudsched/rational.hpp"
#include "cloudsched/workload.hpp"

namespace cloudsched {

struct StaticPolicy {
  // mixture[l][i] = probability that server l runs cluster.feasible(l)[i].
  std::vector<std::vector<Rational>> mixture;
  // Per-server share of the arrival rates; empty when solved from a bare
  // workload vector.
  std::vector<RateMatrix> rate_split;
};

struct StaticCostResult {
  Rational value;
  StaticPolicy policy;
};

// Exact server cost c0 1{W != 0} (+ sum_m c_m W_m when affine).
Rational exact_server_cost(const AggregateConfig& w, const CostParams& p);

// min sum_l E_pi[C1] subject to the mixture serving at least the workload
// of each type. Throws InfeasibleError outside the capacity region.
StaticCostResult solve_static_cost(const RateMatrix& rates,
                                   const ClusterModel& cluster,
                                   const CostParams& p);
StaticCostResult solve_static_cost(const std::vector<Rational>& workload,
                                   const ClusterModel& cluster,
                                   const CostParams& p);

// Expected cost of `policy`, recomputed from its mixtures.
Rational policy_cost(const StaticPolicy& policy, const ClusterModel& cluster,
                     const CostParams& p);

// Largest rho with rho * direction inside the capacity region. Throws
// ConfigError for an all-zero direction.
Rational capacity_boundary(const RateMatrix& direction,
                           const ClusterModel& cluster);
Rational capacity_boundary(const std::vector<Rational>& workload_direction,
                           const ClusterModel& cluster);

// Largest eps with workload + eps * (1, ..., 1) inside the capacity
// region. Negative when the workload itself is outside.
Rational max_uniform_slack(const std::vector<Rational>& workload,
                           const ClusterModel& cluster);

struct BoundParams {
  int servers = 0;     // L
  int types = 0;       // M
  int max_size = 0;    // S
  int a_max = 0;       // A_max
  int max_vms = 0;     // N_max
  double U = 0.0;
  double V = 0.0;
};

struct PerformanceBounds {
  double B2 = 0.0;  // (MS/2)(S A^2 + 2 (L N_max)^2)
  double B4 = 0.0;  // L M S A N_max + L M N_max^2
  double k0 = 0.0;  // 1 / (M (N_max^2 + M S^2 A N_max))
  // Known sizes, weighted backlog: (B2 + U L N_max + V C(eps)) / eps.
  double queue_bound(double eps, double cost_at_eps) const;
  // Known sizes, server cost: (B2 + U L N_max) / V + C(eps).
  double cost_bound(double cost_at_eps) const;
  // Known sizes, migrations: B4 / U.
  double migration_bound() const;
  // Unknown sizes, per-server migrations:
  //   (M N_max A + M N_max log(1 + N_max)) / U.
  double age_migration_bound() const;

  BoundParams params;
};

// Throws ConfigError for non-positive sizes.
PerformanceBounds performance_bounds(const BoundParams& params);

}  // namespace cloudsched

#endif  // CLOUDSCHED_OPTIMUM_HPP_
