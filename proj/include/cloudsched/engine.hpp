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

// Slotted simulation loop and parameter sweeps.
//
// One slot t runs, in order:
//   1. draw the arrivals A(t);
//   2. the scheduler prescribes a config per server from Q(t);
//   3. the prescription is realized against Q(t) and the previous configs;
//   4. costs are charged and the trace invariants checked;
//   5. the queues advance to Q(t + 1), which includes A(t).
// Metrics average slots warmup..T-1; queue statistics are read at the start
// of each slot.

#ifndef CLOUDSCHED_ENGINE_HPP_
#define CLOUDSCHED_ENGINE_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cloudsched/cluster.hpp"
#include "cloudsched/costs.hpp"
#include "cloudsched/rational.hpp"
#include "cloudsched/schedulers.hpp"
#include "cloudsched/workload.hpp"

namespace cloudsched {

// How arrival rates follow from rho.
enum class RateShape {
  kReference,    // lambda_{m,s} = L rho m / 165
  kUniform,  // equal rates, scaled so rho = 1 is the capacity boundary
  kTable,    // rho times an explicit table
};

RateShape parse_rate_shape(const std::string& name);
std::string to_string(RateShape shape);

struct RunConfig {
  ClusterModel cluster = ClusterModel::identical(1, {AggregateConfig{0}}, 1);
  RateShape rate_shape = RateShape::kReference;
  RateMatrix rate_table;  // kTable only
  Rational rho = Rational(4, 5);
  int a_max = 10;
  SchedulerKind scheduler = SchedulerKind::kAlg1;
  CostParams costs;
  int frame_len = 60;
  int64_t horizon = 200'000;
  int64_t warmup = 40'000;
  uint64_t seed = 1;
  bool check_invariants = true;

  // Throws ConfigError on inconsistent settings.
  void validate() const;
};

// Arrival rates implied by the shape, table and rho.
RateMatrix rates_for(const RunConfig& config);

struct InvariantCounters {
  int64_t slots_checked = 0;
  int64_t migration_identity = 0;  // C2(n, N) != C2(n, prescribed)
  int64_t continuation = 0;        // N < min(carry, prescribed) or N > prescribed
  int64_t service_total = 0;       // sum_l N != min(Q, sum_l prescribed)
  int64_t feasibility = 0;         // prescribed aggregate infeasible
  int64_t conservation = 0;        // jobs created or lost
  int64_t workload = 0;            // weighted backlog identity
  int64_t binary_cost = 0;         // binary cost != c0 * active servers
  int64_t age_state = 0;           // visible counts disagree with hidden table

  int64_t total() const {
    return migration_identity + continuation + service_total + feasibility +
           conservation + workload + binary_cost + age_state;
  }
};

struct RunMetrics {
  std::string scheduler;
  double rho = 0.0;
  double V = 0.0;
  double U = 0.0;
  double alpha = 0.0;
  uint64_t seed = 0;
  int64_t horizon = 0;
  int64_t warmup = 0;

  double mean_queue_len = 0.0;         // sum of queue entries
  double mean_weighted_backlog = 0.0;  // sum of remaining work
  double mean_server_cost = 0.0;       // sum_l C1(N^l), actual configs
  double mean_active_servers = 0.0;
  double mean_migrations = 0.0;        // preempted jobs per slot
  double mean_migration_cost = 0.0;    // unit cost per preemption, online only

  double mean_prescribed_server_cost = 0.0;  // sum_l C1(prescribed^l)
  std::array<double, 4> quarter_queue_len{};  // over [0, T) in four windows
  int64_t final_queue_len = 0;
  int64_t final_weighted_backlog = 0;
  int64_t arrivals = 0;
  int64_t completions = 0;

  InvariantCounters invariants;
  IntervalCheck interval_check;
  double wall_seconds = 0.0;
};

// Throws ConfigError for invalid configs and ConsistencyError (with the
// slot number) when a trace invariant that must hold by construction
// breaks, e.g. a negative queue.
RunMetrics run(const RunConfig& config);

enum class SweepAxis { kRho, kV, kU, kAlpha };

SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

// Copy of `base` with `axis` set to `value`.
RunConfig with_axis(const RunConfig& base, SweepAxis axis, double value);

// One row per (value, replication) in that order. Replication r runs with
// seed base.seed + r for every value, so values share random numbers.
// `jobs` <= 0 lets OpenMP decide.
std::vector<RunMetrics> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<double>& values,
                              int replications, int jobs = 0);

// Same rows, computed one after another.
std::vector<RunMetrics> sweep_serial(const RunConfig& base, SweepAxis axis,
                                     const std::vector<double>& values,
                                     int replications);

}  // namespace cloudsched

#endif  // CLOUDSCHED_ENGINE_HPP_
