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

// Scheduling policies. Every decider returns one prescribed config per
// server; the engine turns prescriptions into actual configs with the
// realize_* function of the matching queueing model.

#ifndef CLOUDSCHED_SCHEDULERS_HPP_
#define CLOUDSCHED_SCHEDULERS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cloudsched/cluster.hpp"
#include "cloudsched/costs.hpp"
#include "cloudsched/queueing.hpp"

namespace cloudsched {

enum class SchedulerKind {
  kAlg1,
  kAlg2,
  kQbmw,
  kRefinedQbmw,
  kPreemptive,
  kNonpreemptive,
};

SchedulerKind parse_scheduler(const std::string& name);
std::string to_string(SchedulerKind kind);

enum class QueueModel { kKnownSize, kAgeIndexed, kOffline };

QueueModel queue_model(SchedulerKind kind);

// Inter-migration bookkeeping for one server under Q-BMW.
struct MigrationEpochs {
  int64_t last_epoch = -1;       // t_k, 0-based slot
  double backlog_at_epoch = 0;   // sum_{m,s} s Q_{m,s}(t_k)
  int64_t count = 0;
};

struct IntervalCheck {
  int64_t intervals = 0;
  int64_t violations = 0;
  double min_slack = 0.0;  // min over intervals of T_k - bound
  bool any = false;
};

struct SchedulerState {
  SchedulerState() = default;
  explicit SchedulerState(const ClusterModel& cluster);

  int64_t slot = 0;                        // current slot t, 0-based
  std::vector<ServiceConfig> prev;         // N(t - 1), actual
  std::vector<Departures> prev_departures; // Z(t - 1), age model only

  // Q-BMW.
  std::vector<int64_t> last_migration;  // tau^l
  std::vector<double> stored_f;         // F(Q(tau^l))
  std::vector<MigrationEpochs> epochs;
  IntervalCheck interval_check;
  double interval_k0 = 0.0;  // 0 disables the interval check

  // Non-preemptive frame targets, chosen at each frame start.
  std::vector<AggregateConfig> frame_target;
};

// max{1, (sum_{m,s} s q_{m,s})^alpha}.
double bias_F(const SizeQueues& q, double alpha);

// Per-type sum_s s q_{m,s} as reals.
std::vector<double> backlog_weights(const SizeQueues& q);

// max{1, k0 (backlog - 2V)^(1 - alpha)}, with a negative base read as 0.
double interval_bound(double backlog, double V, double alpha, double k0);

// Known sizes: per-server drift-plus-penalty argmax with migration weight U.
std::vector<ServiceConfig> alg1_decide(const SizeQueues& q,
                                       const SchedulerState& state,
                                       const ClusterModel& cluster,
                                       const CostParams& p);

// Unknown sizes: log-weighted argmax over age-indexed visible counts.
std::vector<ServiceConfig> alg2_decide(const ClassMatrix& visible,
                                       const SchedulerState& state,
                                       const ClusterModel& cluster,
                                       const CostParams& p);

// Offline migration, biased max-weight. Updates tau^l, the stored bias and
// the inter-migration record in `state`.
std::vector<ServiceConfig> qbmw_decide(const SizeQueues& q,
                                       SchedulerState& state,
                                       const ClusterModel& cluster,
                                       const CostParams& p);

// Offline migration with a sublinear per-migration penalty.
std::vector<ServiceConfig> refined_qbmw_decide(const SizeQueues& q,
                                               const SchedulerState& state,
                                               const ClusterModel& cluster,
                                               const CostParams& p);

// Cost-blind max-weight; alg1 with U = V = 0.
std::vector<ServiceConfig> preemptive_baseline_decide(
    const SizeQueues& q, const SchedulerState& state,
    const ClusterModel& cluster);

// Frame-based max-weight without preemption. At each frame start every
// server fixes a target aggregate by max-weight on the backlog, with the
// working weights lowered by each earlier server's choice. Inside a frame
// running jobs always continue and free VM slots admit waiting jobs whose
// size fits in the slots left in the frame, largest first.
std::vector<ServiceConfig> nonpreemptive_baseline_decide(
    const SizeQueues& q, SchedulerState& state, const ClusterModel& cluster,
    int frame_len);

}  // namespace cloudsched

#endif  // CLOUDSCHED_SCHEDULERS_HPP_
