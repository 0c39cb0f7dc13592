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

#include "cloudsched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cloudsched/server_solver.hpp"

namespace cloudsched {

SchedulerKind parse_scheduler(const std::string& name) {
  if (name == "alg1") return SchedulerKind::kAlg1;
  if (name == "alg2") return SchedulerKind::kAlg2;
  if (name == "qbmw") return SchedulerKind::kQbmw;
  if (name == "refined_qbmw") return SchedulerKind::kRefinedQbmw;
  if (name == "preemptive") return SchedulerKind::kPreemptive;
  if (name == "nonpreemptive") return SchedulerKind::kNonpreemptive;
  throw ConfigError("unknown scheduler '" + name +
                    "' (expected alg1, alg2, qbmw, refined_qbmw, preemptive "
                    "or nonpreemptive)");
}

std::string to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kAlg1: return "alg1";
    case SchedulerKind::kAlg2: return "alg2";
    case SchedulerKind::kQbmw: return "qbmw";
    case SchedulerKind::kRefinedQbmw: return "refined_qbmw";
    case SchedulerKind::kPreemptive: return "preemptive";
    case SchedulerKind::kNonpreemptive: return "nonpreemptive";
  }
  return "unknown";
}

QueueModel queue_model(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kAlg2: return QueueModel::kAgeIndexed;
    case SchedulerKind::kQbmw:
    case SchedulerKind::kRefinedQbmw: return QueueModel::kOffline;
    default: return QueueModel::kKnownSize;
  }
}

SchedulerState::SchedulerState(const ClusterModel& cluster) {
  const int servers = cluster.servers();
  const int types = cluster.vm_types();
  const int size = cluster.max_job_size();
  prev.assign(servers, ServiceConfig(types, size));
  prev_departures.assign(servers, Departures(types, size));
  last_migration.assign(servers, 0);
  stored_f.assign(servers, 1.0);
  epochs.assign(servers, MigrationEpochs{});
}

double bias_F(const SizeQueues& q, double alpha) {
  int64_t weighted = 0;
  for (int64_t x : workload_backlog(q)) weighted += x;
  return std::max(1.0, std::pow(static_cast<double>(weighted), alpha));
}

std::vector<double> backlog_weights(const SizeQueues& q) {
  std::vector<double> out;
  for (int64_t x : workload_backlog(q)) out.push_back(static_cast<double>(x));
  return out;
}

double interval_bound(double backlog, double V, double alpha, double k0) {
  const double base = std::max(0.0, backlog - 2.0 * V);
  return std::max(1.0, k0 * std::pow(base, 1.0 - alpha));
}

namespace {

// Solves every server. Servers with nothing to continue and the same
// feasible set face the same problem, so their answer is reused.
template <typename MakeObjective>
std::vector<ServerChoice> solve_all(const ClassMatrix& q,
                                    std::span<const ClassMatrix> carries,
                                    const ClusterModel& cluster,
                                    MakeObjective&& make_objective) {
  const int servers = cluster.servers();
  std::vector<ServerChoice> out(servers);
  struct Cached {
    const ConfigSet* set;
    double bias;
    bool bias_enabled;
    int source;
  };
  std::vector<Cached> cache;
  for (int l = 0; l < servers; ++l) {
    const ServerObjective obj = make_objective(l);
    const ConfigSet& set = cluster.feasible(l);
    const bool idle = carries[l].is_zero();
    if (idle) {
      auto hit = std::find_if(cache.begin(), cache.end(), [&](const Cached& c) {
        return c.set == &set && c.bias == obj.bias &&
               c.bias_enabled == obj.bias_enabled;
      });
      if (hit != cache.end()) {
        out[l] = out[hit->source];
        continue;
      }
    }
    out[l] = solve_server(set, q, carries[l], obj);
    if (idle) cache.push_back({&set, obj.bias, obj.bias_enabled, l});
  }
  return out;
}

std::vector<ClassMatrix> known_carries(const SchedulerState& state) {
  std::vector<ClassMatrix> out;
  out.reserve(state.prev.size());
  for (const auto& n : state.prev) out.push_back(carry_known(n));
  return out;
}

std::vector<ServiceConfig> configs_of(std::vector<ServerChoice>&& choices) {
  std::vector<ServiceConfig> out;
  out.reserve(choices.size());
  for (auto& c : choices) out.push_back(std::move(c.config));
  return out;
}

void check_state(const SchedulerState& state, const ClusterModel& cluster) {
  if (static_cast<int>(state.prev.size()) != cluster.servers()) {
    throw std::invalid_argument("scheduler state does not match the cluster");
  }
}

}  // namespace

std::vector<ServiceConfig> alg1_decide(const SizeQueues& q,
                                       const SchedulerState& state,
                                       const ClusterModel& cluster,
                                       const CostParams& p) {
  check_state(state, cluster);
  ServerObjective obj;
  obj.kind = ServerObjective::Kind::kMigrationPenalty;
  obj.weights = backlog_weights(q);
  obj.costs = p;
  const auto carries = known_carries(state);
  return configs_of(
      solve_all(q, carries, cluster, [&](int) { return obj; }));
}

std::vector<ServiceConfig> alg2_decide(const ClassMatrix& visible,
                                       const SchedulerState& state,
                                       const ClusterModel& cluster,
                                       const CostParams& p) {
  check_state(state, cluster);
  ServerObjective obj;
  obj.kind = ServerObjective::Kind::kMigrationPenalty;
  obj.costs = p;
  for (int m = 0; m < visible.types(); ++m) {
    obj.weights.push_back(std::log1p(static_cast<double>(visible.row_total(m))));
  }
  std::vector<ClassMatrix> carries;
  carries.reserve(state.prev.size());
  for (std::size_t l = 0; l < state.prev.size(); ++l) {
    carries.push_back(carry_age(state.prev[l], state.prev_departures[l]));
  }
  return configs_of(
      solve_all(visible, carries, cluster, [&](int) { return obj; }));
}

std::vector<ServiceConfig> qbmw_decide(const SizeQueues& q,
                                       SchedulerState& state,
                                       const ClusterModel& cluster,
                                       const CostParams& p) {
  check_state(state, cluster);
  ServerObjective base;
  base.kind = ServerObjective::Kind::kBias;
  base.weights = backlog_weights(q);
  base.costs = p;
  double backlog = 0.0;
  for (double w : base.weights) backlog += w;
  const bool first_slot = state.slot == 0;

  const auto carries = known_carries(state);
  auto choices = solve_all(q, carries, cluster, [&](int l) {
    ServerObjective obj = base;
    obj.bias_enabled = !first_slot;
    obj.bias = 1.0 / state.stored_f[l];
    return obj;
  });

  const int64_t t = state.slot;
  for (int l = 0; l < cluster.servers(); ++l) {
    bool migrates = first_slot;
    for (int64_t k : choices[l].migrations) migrates = migrates || k > 0;
    if (!migrates) continue;
    state.last_migration[l] = t;
    state.stored_f[l] = bias_F(q, p.alpha);
    MigrationEpochs& e = state.epochs[l];
    if (e.last_epoch >= 0 && state.interval_k0 > 0.0) {
      const double interval = static_cast<double>(t - e.last_epoch);
      const double bound =
          interval_bound(e.backlog_at_epoch, p.V, p.alpha, state.interval_k0);
      const double slack = interval - bound;
      IntervalCheck& check = state.interval_check;
      ++check.intervals;
      if (slack < 0) ++check.violations;
      check.min_slack = check.any ? std::min(check.min_slack, slack) : slack;
      check.any = true;
    }
    e.last_epoch = t;
    e.backlog_at_epoch = backlog;
    ++e.count;
  }
  return configs_of(std::move(choices));
}

std::vector<ServiceConfig> refined_qbmw_decide(const SizeQueues& q,
                                               const SchedulerState& state,
                                               const ClusterModel& cluster,
                                               const CostParams& p) {
  check_state(state, cluster);
  ServerObjective obj;
  obj.kind = ServerObjective::Kind::kPowerPenalty;
  obj.weights = backlog_weights(q);
  obj.costs = p;
  const auto carries = known_carries(state);
  return configs_of(
      solve_all(q, carries, cluster, [&](int) { return obj; }));
}

std::vector<ServiceConfig> preemptive_baseline_decide(
    const SizeQueues& q, const SchedulerState& state,
    const ClusterModel& cluster) {
  CostParams blind;
  blind.model = CostModel::kBinary;
  blind.U = 0.0;
  blind.V = 0.0;
  return alg1_decide(q, state, cluster, blind);
}

std::vector<ServiceConfig> nonpreemptive_baseline_decide(
    const SizeQueues& q, SchedulerState& state, const ClusterModel& cluster,
    int frame_len) {
  check_state(state, cluster);
  const int servers = cluster.servers();
  const int types = cluster.vm_types();
  const int size = cluster.max_job_size();
  if (frame_len < size) {
    throw ConfigError("frame_len must be at least the maximum job size");
  }
  const int64_t position = state.slot % frame_len;
  const int64_t left = frame_len - position;

  if (position == 0 || static_cast<int>(state.frame_target.size()) != servers) {
    std::vector<double> weight = backlog_weights(q);
    state.frame_target.assign(servers, AggregateConfig());
    for (int l = 0; l < servers; ++l) {
      const AggregateConfig* chosen = nullptr;
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& w : cluster.feasible(l)) {
        double v = 0.0;
        for (int m = 0; m < types; ++m) v += weight[m] * w[m];
        if (v > best) {  // sets are sorted, so ties keep the smaller W
          best = v;
          chosen = &w;
        }
      }
      state.frame_target[l] = *chosen;
      for (int m = 0; m < types; ++m) {
        weight[m] -= static_cast<double>((*chosen)[m]) * frame_len;
      }
    }
  }

  std::vector<ServiceConfig> out;
  out.reserve(servers);
  ClassMatrix pool = q;
  for (int l = 0; l < servers; ++l) {
    out.push_back(carry_known(state.prev[l]));
    for (int m = 0; m < types; ++m) {
      for (int j = 0; j < size; ++j) pool(m, j) -= out[l](m, j);
    }
  }
  for (int m = 0; m < types; ++m) {
    for (int j = 0; j < size; ++j) {
      if (pool(m, j) < 0) {
        throw ConsistencyError("running jobs missing from the queue");
      }
    }
  }
  const int fits = static_cast<int>(std::min<int64_t>(left, size));
  for (int l = 0; l < servers; ++l) {
    for (int m = 0; m < types; ++m) {
      int64_t free = positive_part(state.frame_target[l][m] -
                                   out[l].row_total(m));
      for (int j = fits - 1; j >= 0 && free > 0; --j) {
        const int64_t take = std::min(free, pool(m, j));
        out[l](m, j) += take;
        pool(m, j) -= take;
        free -= take;
      }
    }
  }
  return out;
}

}  // namespace cloudsched
