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

#include "cloudsched/optimum.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "cloudsched/simplex.hpp"

namespace cloudsched {

namespace {

struct ServerGroups {
  std::vector<const ConfigSet*> sets;
  std::vector<int> size;           // servers in the group
  std::vector<int> group_of;       // server -> group
  std::vector<int> first_column;   // group -> first LP column
  int columns = 0;
};

ServerGroups group_servers(const ClusterModel& cluster) {
  ServerGroups g;
  std::map<const ConfigSet*, int> index;
  for (int l = 0; l < cluster.servers(); ++l) {
    const ConfigSet* set = &cluster.feasible(l);
    auto [it, fresh] = index.emplace(set, static_cast<int>(g.sets.size()));
    if (fresh) {
      g.sets.push_back(set);
      g.size.push_back(0);
      g.first_column.push_back(g.columns);
      g.columns += static_cast<int>(set->size());
    }
    ++g.size[it->second];
    g.group_of.push_back(it->second);
  }
  return g;
}

void check_types(std::size_t n, const ClusterModel& cluster) {
  if (static_cast<int>(n) != cluster.vm_types()) {
    throw ConfigError("workload has " + std::to_string(n) +
                      " entries, cluster has " +
                      std::to_string(cluster.vm_types()) + " VM types");
  }
}

// Rows "sum_W x_{g,W} = |g|" for every group, padded to `width` columns.
void add_mass_rows(LinearProgram& lp, const ServerGroups& g, int width) {
  for (std::size_t k = 0; k < g.sets.size(); ++k) {
    std::vector<Rational> row(width, Rational(0));
    for (std::size_t i = 0; i < g.sets[k]->size(); ++i) {
      row[g.first_column[k] + i] = 1;
    }
    lp.add_row(std::move(row), RowSense::kEqual, Rational(g.size[k]));
  }
}

// Coefficients of sum_{g,W} x_{g,W} W_m, padded to `width` columns.
std::vector<Rational> service_row(const ServerGroups& g, int m, int width) {
  std::vector<Rational> row(width, Rational(0));
  for (std::size_t k = 0; k < g.sets.size(); ++k) {
    for (std::size_t i = 0; i < g.sets[k]->size(); ++i) {
      row[g.first_column[k] + i] = (*g.sets[k])[i][m];
    }
  }
  return row;
}

StaticPolicy split_policy(const ServerGroups& g, const ClusterModel& cluster,
                          const std::vector<Rational>& x) {
  StaticPolicy policy;
  for (int l = 0; l < cluster.servers(); ++l) {
    const int k = g.group_of[l];
    std::vector<Rational> mix(g.sets[k]->size());
    for (std::size_t i = 0; i < mix.size(); ++i) {
      mix[i] = x[g.first_column[k] + i] / g.size[k];
    }
    policy.mixture.push_back(std::move(mix));
  }
  return policy;
}

}  // namespace

Rational exact_server_cost(const AggregateConfig& w, const CostParams& p) {
  if (w.is_zero()) return Rational(0);
  Rational cost = rational_from_double(p.c0);
  if (p.model == CostModel::kAffine) {
    for (int m = 0; m < w.types(); ++m) {
      cost += rational_from_double(p.c.at(m)) * w[m];
    }
  }
  return cost;
}

StaticCostResult solve_static_cost(const std::vector<Rational>& workload,
                                   const ClusterModel& cluster,
                                   const CostParams& p) {
  check_types(workload.size(), cluster);
  const ServerGroups g = group_servers(cluster);
  LinearProgram lp;
  lp.objective.assign(g.columns, Rational(0));
  for (std::size_t k = 0; k < g.sets.size(); ++k) {
    for (std::size_t i = 0; i < g.sets[k]->size(); ++i) {
      lp.objective[g.first_column[k] + i] =
          -exact_server_cost((*g.sets[k])[i], p);
    }
  }
  add_mass_rows(lp, g, g.columns);
  for (int m = 0; m < cluster.vm_types(); ++m) {
    lp.add_row(service_row(g, m, g.columns), RowSense::kGreaterEqual,
               workload[m]);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw InfeasibleError("workload lies outside the capacity region");
  }
  StaticCostResult out;
  out.value = -sol.value;
  out.policy = split_policy(g, cluster, sol.x);
  return out;
}

StaticCostResult solve_static_cost(const RateMatrix& rates,
                                   const ClusterModel& cluster,
                                   const CostParams& p) {
  if (rates.max_size() != cluster.max_job_size()) {
    throw ConfigError("rate table width differs from max_job_size");
  }
  StaticCostResult out = solve_static_cost(workload_rate(rates), cluster, p);
  const int servers = cluster.servers();
  const int types = cluster.vm_types();
  // Split the rates in proportion to the service each server offers.
  std::vector<std::vector<Rational>> share(servers,
                                           std::vector<Rational>(types));
  std::vector<Rational> total(types, Rational(0));
  for (int l = 0; l < servers; ++l) {
    const ConfigSet& set = cluster.feasible(l);
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (int m = 0; m < types; ++m) {
        share[l][m] += out.policy.mixture[l][i] * set[i][m];
      }
    }
    for (int m = 0; m < types; ++m) total[m] += share[l][m];
  }
  for (int l = 0; l < servers; ++l) {
    RateMatrix part(types, rates.max_size());
    for (int m = 0; m < types; ++m) {
      if (sgn(total[m]) == 0) continue;
      const Rational fraction = share[l][m] / total[m];
      for (int j = 0; j < rates.max_size(); ++j) {
        part.set(m, j, rates.at(m, j) * fraction);
      }
    }
    out.policy.rate_split.push_back(std::move(part));
  }
  return out;
}

Rational policy_cost(const StaticPolicy& policy, const ClusterModel& cluster,
                     const CostParams& p) {
  Rational cost(0);
  for (int l = 0; l < cluster.servers(); ++l) {
    const ConfigSet& set = cluster.feasible(l);
    for (std::size_t i = 0; i < set.size(); ++i) {
      cost += policy.mixture.at(l).at(i) * exact_server_cost(set[i], p);
    }
  }
  return cost;
}

Rational capacity_boundary(const std::vector<Rational>& workload_direction,
                           const ClusterModel& cluster) {
  check_types(workload_direction.size(), cluster);
  bool nonzero = false;
  for (const auto& d : workload_direction) {
    if (sgn(d) < 0) throw ConfigError("direction must be non-negative");
    nonzero = nonzero || sgn(d) != 0;
  }
  if (!nonzero) throw ConfigError("capacity direction must be nonzero");
  const ServerGroups g = group_servers(cluster);
  const int width = g.columns + 1;  // last column is rho
  LinearProgram lp;
  lp.objective.assign(width, Rational(0));
  lp.objective[g.columns] = 1;
  add_mass_rows(lp, g, width);
  for (int m = 0; m < cluster.vm_types(); ++m) {
    auto row = service_row(g, m, width);
    row[g.columns] = -workload_direction[m];
    lp.add_row(std::move(row), RowSense::kGreaterEqual, Rational(0));
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::logic_error("capacity LP did not reach an optimum");
  }
  return sol.value;
}

Rational capacity_boundary(const RateMatrix& direction,
                           const ClusterModel& cluster) {
  return capacity_boundary(workload_rate(direction), cluster);
}

Rational max_uniform_slack(const std::vector<Rational>& workload,
                           const ClusterModel& cluster) {
  check_types(workload.size(), cluster);
  const ServerGroups g = group_servers(cluster);
  // eps = plus - minus, both >= 0.
  const int width = g.columns + 2;
  LinearProgram lp;
  lp.objective.assign(width, Rational(0));
  lp.objective[g.columns] = 1;
  lp.objective[g.columns + 1] = -1;
  add_mass_rows(lp, g, width);
  for (int m = 0; m < cluster.vm_types(); ++m) {
    auto row = service_row(g, m, width);
    row[g.columns] = -1;
    row[g.columns + 1] = 1;
    lp.add_row(std::move(row), RowSense::kGreaterEqual, workload[m]);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::logic_error("slack LP did not reach an optimum");
  }
  return sol.value;
}

double PerformanceBounds::queue_bound(double eps, double cost_at_eps) const {
  if (!(eps > 0)) throw ConfigError("epsilon must be > 0");
  return (B2 + params.U * params.servers * params.max_vms +
          params.V * cost_at_eps) /
         eps;
}

double PerformanceBounds::cost_bound(double cost_at_eps) const {
  if (!(params.V > 0)) return std::numeric_limits<double>::infinity();
  return (B2 + params.U * params.servers * params.max_vms) / params.V +
         cost_at_eps;
}

double PerformanceBounds::migration_bound() const {
  if (!(params.U > 0)) return std::numeric_limits<double>::infinity();
  return B4 / params.U;
}

double PerformanceBounds::age_migration_bound() const {
  if (!(params.U > 0)) return std::numeric_limits<double>::infinity();
  const double m = params.types;
  const double n = params.max_vms;
  return (m * n * params.a_max + m * n * std::log1p(n)) / params.U;
}

PerformanceBounds performance_bounds(const BoundParams& params) {
  if (params.servers < 1 || params.types < 1 || params.max_size < 1 ||
      params.a_max < 1 || params.max_vms < 1) {
    throw ConfigError("bound parameters must be positive");
  }
  const double L = params.servers;
  const double M = params.types;
  const double S = params.max_size;
  const double A = params.a_max;
  const double N = params.max_vms;
  PerformanceBounds b;
  b.params = params;
  b.B2 = (M * S / 2.0) * (S * A * A + 2.0 * (L * N) * (L * N));
  b.B4 = L * M * S * A * N + L * M * N * N;
  b.k0 = 1.0 / (M * (N * N + M * S * S * A * N));
  return b;
}

}  // namespace cloudsched
