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

// Central job queues and their slot-to-slot evolution.
//
// Three models share one matrix layout (types x S columns):
//   known size   column j = residual size j + 1, queues include jobs in
//                service; a preempted job may resume elsewhere at once.
//   unknown size column j = age j (slots of service received); the true
//                sizes live in a hidden composition table that only the
//                simulator reads.
//   offline      residual-size layout, but a preempted job sits out the
//                slot in which it is preempted and gets one slot of work
//                added back.
//
// Schedulers produce a prescribed per-server config; the realize_*
// functions turn it into the actual config given the queue contents and
// the jobs each server was running in the previous slot.

#ifndef CLOUDSCHED_QUEUEING_HPP_
#define CLOUDSCHED_QUEUEING_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cloudsched/types.hpp"
#include "cloudsched/workload.hpp"

namespace cloudsched {

using SizeQueues = ClassMatrix;
using ServiceConfig = ClassMatrix;
using Departures = ClassMatrix;

// Jobs a server may keep running into the next slot, per class.
//   known size: carry_{m,s} = n_prev_{m,s+1}
//   age model:  carry_{m,a} = n_prev_{m,a-1} - z_prev_{m,a-1}
ClassMatrix carry_known(const ServiceConfig& n_prev);
ClassMatrix carry_age(const ServiceConfig& n_prev, const Departures& z_prev);

// Steps 2-4 of the known-size scheduler: each server first keeps
// min(prescribed, carried) of its own jobs, then servers in ascending index
// order draw the rest of their prescription from what is left in the queue.
// Guarantees N <= prescribed, sum_l N = min(Q, sum_l prescribed) and
// N >= min(carried, prescribed). Throws ConsistencyError if the queue holds
// fewer jobs than the servers carry.
std::vector<ServiceConfig> realize_known(
    const SizeQueues& q, std::span<const ServiceConfig> n_prev,
    std::span<const ServiceConfig> prescribed);

// Known-size queue update driven by the summed prescription:
//   Q'_{m,s} = (Q_{m,s} - sum_l Nbar_{m,s})^+ + A_{m,s}
//              + min(sum_l Nbar_{m,s+1}, Q_{m,s+1}).
SizeQueues advance_known(const SizeQueues& q, const ClassMatrix& prescribed_sum,
                         const ArrivalBatch& arrivals);

// Age-indexed queue state. Visible counts are derived from a hidden table
// composition(m, a, j) = jobs of type m, age a, true size j + 1 (j >= a).
class AgeQueues {
 public:
  AgeQueues(int types, int max_size);

  int types() const { return types_; }
  int max_size() const { return max_size_; }

  int64_t composition(int m, int a, int j) const {
    return comp_[index(m, a, j)];
  }
  void set_composition(int m, int a, int j, int64_t count);

  // Q~_{m,a}; the only part a scheduler may look at.
  ClassMatrix visible() const;
  // sum over jobs of (true size - age), the residual work in the system.
  int64_t remaining_workload() const;
  int64_t total_jobs() const;

  // New jobs join age 0 with their true sizes.
  void add_arrivals(const ArrivalBatch& arrivals);

 private:
  friend std::vector<Departures> sample_departures(
      std::span<const ServiceConfig> served, AgeQueues& queues, Rng& rng);

  std::size_t index(int m, int a, int j) const {
    return (static_cast<std::size_t>(m) * max_size_ + a) * max_size_ + j;
  }

  int types_;
  int max_size_;
  std::vector<int64_t> comp_;
};

// Steps 2-4 of the unknown-size scheduler; same contract as realize_known
// with carry_age as the continuation base.
std::vector<ServiceConfig> realize_unknown(
    const ClassMatrix& visible, std::span<const ServiceConfig> n_prev,
    std::span<const Departures> z_prev,
    std::span<const ServiceConfig> prescribed);

// Picks, server by server, a uniformly random subset of each class to serve
// and reports how many of them finish this slot (true size == age + 1).
// Advances the composition: finished jobs leave, other served jobs age by
// one, unserved jobs keep their age. Jobs served at age S - 1 always finish.
// Throws ConsistencyError if a class is asked to serve more jobs than it
// holds.
std::vector<Departures> sample_departures(std::span<const ServiceConfig> served,
                                          AgeQueues& queues, Rng& rng);

// Age-indexed update of the visible counts:
//   Q'_{m,0} = (Q_{m,0} - sum_l N~_{m,0})^+ + sum_s A_{m,s}
//   Q'_{m,a} = (Q_{m,a} - sum_l N~_{m,a})^+
//              + min(sum_l N~_{m,a-1}, Q_{m,a-1}) - Z_{m,a-1}
ClassMatrix advance_unknown(const ClassMatrix& visible,
                            const ClassMatrix& prescribed_sum,
                            const ClassMatrix& departures_sum,
                            const ArrivalBatch& arrivals);

// Offline-migration realization. Same kept/drawn structure as
// realize_known, but the queue pool a server draws from excludes every job
// that was in service last slot: a preempted job is in transit this slot and
// cannot start elsewhere until the next one.
std::vector<ServiceConfig> realize_offline(
    const SizeQueues& q, std::span<const ServiceConfig> n_prev,
    std::span<const ServiceConfig> prescribed);

// Offline-migration queue update. With mig_{m,s} = sum_l (N_prev_{m,s+1} -
// N_{m,s})^+ the type-(m,s) jobs preempted this slot:
//   Q'_{m,s} = Q_{m,s} - sum_l N_{m,s} + A_{m,s} + sum_l N_{m,s+1}
//              + mig_{m,s-1} - mig_{m,s}
// (mig_{m,0} = 0). Each preempted job re-enters one size class higher, so
// the per-type work grows by one unit per migration. Throws
// ConsistencyError on a negative queue.
SizeQueues advance_offline(const SizeQueues& q,
                           std::span<const ServiceConfig> actual,
                           std::span<const ServiceConfig> actual_prev,
                           const ArrivalBatch& arrivals);

// Per-type sum_s s * Q_{m,s}.
std::vector<int64_t> workload_backlog(const SizeQueues& q);

// Debug dump, one "m s count" line per nonzero entry: 1-based type, then
// the size (or the age when `age_indexed`).
void write_dump(std::ostream& out, const ClassMatrix& q,
                bool age_indexed = false);

}  // namespace cloudsched

#endif  // CLOUDSCHED_QUEUEING_HPP_
