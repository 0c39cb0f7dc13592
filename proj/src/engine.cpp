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

#include "cloudsched/engine.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>

#include "cloudsched/optimum.hpp"
#include "cloudsched/queueing.hpp"

namespace cloudsched {

RateShape parse_rate_shape(const std::string& name) {
  if (name == "reference") return RateShape::kReference;
  if (name == "uniform") return RateShape::kUniform;
  if (name == "table") return RateShape::kTable;
  throw ConfigError("unknown rate_shape '" + name +
                    "' (expected reference, uniform or table)");
}

std::string to_string(RateShape shape) {
  switch (shape) {
    case RateShape::kReference: return "reference";
    case RateShape::kUniform: return "uniform";
    case RateShape::kTable: return "table";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (horizon <= 0) throw ConfigError("horizon must be > 0");
  if (warmup < 0 || warmup >= horizon) {
    throw ConfigError("warmup must satisfy 0 <= warmup < horizon");
  }
  if (a_max < 1) throw ConfigError("a_max must be >= 1");
  if (sgn(rho) < 0) throw ConfigError("rho must be >= 0");
  costs.validate(cluster.vm_types());
  if (scheduler == SchedulerKind::kNonpreemptive &&
      frame_len < cluster.max_job_size()) {
    throw ConfigError("frame_len must be >= max_job_size");
  }
  if (rate_shape == RateShape::kTable &&
      (rate_table.types() != cluster.vm_types() ||
       rate_table.max_size() != cluster.max_job_size())) {
    throw ConfigError("rate_table must be vm_types x max_job_size");
  }
}

RateMatrix rates_for(const RunConfig& config) {
  const ClusterModel& cl = config.cluster;
  switch (config.rate_shape) {
    case RateShape::kReference:
      return build_reference_rates(cl.servers(), config.rho, cl.vm_types(),
                               cl.max_job_size());
    case RateShape::kUniform: {
      RateMatrix direction(cl.vm_types(), cl.max_job_size());
      for (int m = 0; m < cl.vm_types(); ++m) {
        for (int j = 0; j < cl.max_job_size(); ++j) direction.set(m, j, 1);
      }
      const Rational edge = capacity_boundary(direction, cl);
      if (sgn(edge) == 0) {
        throw ConfigError("uniform rates: some VM type cannot be hosted");
      }
      return direction.scaled(edge * config.rho);
    }
    case RateShape::kTable:
      return config.rate_table.scaled(config.rho);
  }
  throw ConfigError("unknown rate shape");
}

namespace {

int64_t weighted_total(const SizeQueues& q) {
  int64_t w = 0;
  for (int64_t x : workload_backlog(q)) w += x;
  return w;
}

// N <= prescribed and N >= min(carry, prescribed), entrywise.
bool continues(const ServiceConfig& actual, const ServiceConfig& prescribed,
               const ClassMatrix& carry) {
  auto n = actual.flat();
  auto p = prescribed.flat();
  auto c = carry.flat();
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] > p[i] || n[i] < std::min(c[i], p[i])) return false;
  }
  return true;
}

AggregateConfig aggregate_of(const ServiceConfig& n) {
  std::vector<int> counts(n.types());
  for (int m = 0; m < n.types(); ++m) {
    counts[m] = static_cast<int>(n.row_total(m));
  }
  return AggregateConfig(std::move(counts));
}

class Simulation {
 public:
  explicit Simulation(const RunConfig& config)
      : cfg_(config),
        cl_(config.cluster),
        types_(cl_.vm_types()),
        size_(cl_.max_job_size()),
        model_(queue_model(config.scheduler)),
        sampler_(rates_for(config), config.a_max),
        arrival_rng_(mix_seed(config.seed, 0)),
        service_rng_(mix_seed(config.seed, 1)),
        state_(cl_),
        q_(types_, size_),
        age_(types_, size_),
        arrivals_(types_, size_) {
    if (config.scheduler == SchedulerKind::kQbmw) {
      BoundParams bp{cl_.servers(), types_, size_, config.a_max, cl_.max_vms(),
                     config.costs.U, config.costs.V};
      state_.interval_k0 = performance_bounds(bp).k0;
    }
  }

  RunMetrics run() {
    const auto start = std::chrono::steady_clock::now();
    const int64_t horizon = cfg_.horizon;
    double sum_queue = 0, sum_backlog = 0, sum_cost = 0, sum_active = 0;
    double sum_migrations = 0, sum_prescribed_cost = 0;
    std::array<double, 4> quarter{};
    std::array<int64_t, 4> quarter_slots{};

    for (int64_t t = 0; t < horizon; ++t) {
      state_.slot = t;
      sampler_.sample(arrival_rng_, arrivals_);
      metrics_.arrivals += arrivals_.total();

      const int64_t queue_len =
          model_ == QueueModel::kAgeIndexed ? age_.total_jobs() : q_.total();
      const int64_t backlog = model_ == QueueModel::kAgeIndexed
                                  ? age_.remaining_workload()
                                  : weighted_total(q_);
      const int window = static_cast<int>((4 * t) / horizon);
      quarter[window] += static_cast<double>(queue_len);
      ++quarter_slots[window];

      SlotCosts costs;
      try {
        costs = step();
      } catch (const ConsistencyError& e) {
        throw ConsistencyError("slot " + std::to_string(t) + ": " + e.what());
      }

      if (t >= cfg_.warmup) {
        sum_queue += static_cast<double>(queue_len);
        sum_backlog += static_cast<double>(backlog);
        sum_cost += costs.server_cost;
        sum_prescribed_cost += costs.prescribed_cost;
        sum_active += costs.active;
        sum_migrations += static_cast<double>(costs.migrations);
      }
    }

    const double n = static_cast<double>(horizon - cfg_.warmup);
    RunMetrics& m = metrics_;
    m.scheduler = to_string(cfg_.scheduler);
    m.rho = to_double(cfg_.rho);
    m.V = cfg_.costs.V;
    m.U = cfg_.costs.U;
    m.alpha = cfg_.costs.alpha;
    m.seed = cfg_.seed;
    m.horizon = horizon;
    m.warmup = cfg_.warmup;
    m.mean_queue_len = sum_queue / n;
    m.mean_weighted_backlog = sum_backlog / n;
    m.mean_server_cost = sum_cost / n;
    m.mean_prescribed_server_cost = sum_prescribed_cost / n;
    m.mean_active_servers = sum_active / n;
    m.mean_migrations = sum_migrations / n;
    m.mean_migration_cost =
        model_ == QueueModel::kOffline ? 0.0 : m.mean_migrations;
    for (int i = 0; i < 4; ++i) {
      m.quarter_queue_len[i] =
          quarter_slots[i] ? quarter[i] / quarter_slots[i] : 0.0;
    }
    if (model_ == QueueModel::kAgeIndexed) {
      m.final_queue_len = age_.total_jobs();
      m.final_weighted_backlog = age_.remaining_workload();
    } else {
      m.final_queue_len = q_.total();
      m.final_weighted_backlog = weighted_total(q_);
    }
    m.interval_check = state_.interval_check;
    m.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return m;
  }

 private:
  struct SlotCosts {
    double server_cost = 0;
    double prescribed_cost = 0;
    double active = 0;
    int64_t migrations = 0;
  };

  std::vector<ServiceConfig> decide(const ClassMatrix& visible) {
    const CostParams& p = cfg_.costs;
    switch (cfg_.scheduler) {
      case SchedulerKind::kAlg1: return alg1_decide(q_, state_, cl_, p);
      case SchedulerKind::kAlg2: return alg2_decide(visible, state_, cl_, p);
      case SchedulerKind::kQbmw: return qbmw_decide(q_, state_, cl_, p);
      case SchedulerKind::kRefinedQbmw:
        return refined_qbmw_decide(q_, state_, cl_, p);
      case SchedulerKind::kPreemptive:
        return preemptive_baseline_decide(q_, state_, cl_);
      case SchedulerKind::kNonpreemptive:
        return nonpreemptive_baseline_decide(q_, state_, cl_, cfg_.frame_len);
    }
    throw ConfigError("unknown scheduler");
  }

  SlotCosts step() {
    const bool check = cfg_.check_invariants;
    InvariantCounters& inv = metrics_.invariants;
    const int servers = cl_.servers();
    const ClassMatrix visible =
        model_ == QueueModel::kAgeIndexed ? age_.visible() : ClassMatrix();
    const ClassMatrix& queues = model_ == QueueModel::kAgeIndexed ? visible : q_;

    std::vector<ServiceConfig> prescribed = decide(visible);
    std::vector<ServiceConfig> actual;
    switch (model_) {
      case QueueModel::kKnownSize:
        actual = realize_known(q_, state_.prev, prescribed);
        break;
      case QueueModel::kAgeIndexed:
        actual = realize_unknown(visible, state_.prev, state_.prev_departures,
                                 prescribed);
        break;
      case QueueModel::kOffline:
        actual = realize_offline(q_, state_.prev, prescribed);
        break;
    }

    SlotCosts out;
    const ClassMatrix prescribed_sum =
        sum_over_servers(prescribed, types_, size_);
    const ClassMatrix actual_sum = sum_over_servers(actual, types_, size_);
    for (int l = 0; l < servers; ++l) {
      const double cost = server_cost(actual[l], cfg_.costs);
      out.server_cost += cost;
      out.prescribed_cost += server_cost(prescribed[l], cfg_.costs);
      if (!actual[l].is_zero()) out.active += 1;
      int64_t moved, moved_prescribed;
      ClassMatrix carry;
      if (model_ == QueueModel::kAgeIndexed) {
        moved = migration_cost_age(state_.prev[l], state_.prev_departures[l],
                                   actual[l]);
        moved_prescribed = migration_cost_age(
            state_.prev[l], state_.prev_departures[l], prescribed[l]);
        if (check) carry = carry_age(state_.prev[l], state_.prev_departures[l]);
      } else {
        moved = migration_cost(state_.prev[l], actual[l]);
        moved_prescribed = migration_cost(state_.prev[l], prescribed[l]);
        if (check) carry = carry_known(state_.prev[l]);
      }
      out.migrations += moved;
      if (check) {
        if (moved != moved_prescribed) ++inv.migration_identity;
        if (!continues(actual[l], prescribed[l], carry)) ++inv.continuation;
        if (!is_feasible(aggregate_of(prescribed[l]), cl_, l)) {
          ++inv.feasibility;
        }
      }
    }
    if (check && cfg_.costs.model == CostModel::kBinary) {
      const double expected = cfg_.costs.c0 * out.active;
      if (std::abs(out.server_cost - expected) > 1e-9 * (1.0 + expected)) {
        ++inv.binary_cost;
      }
    }
    if (check && model_ != QueueModel::kOffline) {
      auto n = actual_sum.flat();
      auto p = prescribed_sum.flat();
      auto qq = queues.flat();
      for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] != std::min(qq[i], p[i])) {
          ++inv.service_total;
          break;
        }
      }
    }

    // Advance.
    const int64_t jobs_before =
        model_ == QueueModel::kAgeIndexed ? visible.total() : q_.total();
    int64_t completed = 0;
    int64_t jobs_after = 0;
    if (model_ == QueueModel::kAgeIndexed) {
      std::vector<Departures> z = sample_departures(actual, age_, service_rng_);
      const ClassMatrix z_sum = sum_over_servers(z, types_, size_);
      completed = z_sum.total();
      age_.add_arrivals(arrivals_);
      if (check) {
        const ClassMatrix next =
            advance_unknown(visible, prescribed_sum, z_sum, arrivals_);
        if (next != age_.visible()) ++inv.age_state;
        jobs_after = next.total();
      } else {
        jobs_after = age_.total_jobs();
      }
      state_.prev_departures = std::move(z);
    } else {
      for (int m = 0; m < types_; ++m) completed += actual_sum(m, 0);
      const int64_t backlog_before = weighted_total(q_);
      if (model_ == QueueModel::kKnownSize) {
        q_ = advance_known(q_, prescribed_sum, arrivals_);
      } else {
        q_ = advance_offline(q_, actual, state_.prev, arrivals_);
      }
      jobs_after = q_.total();
      if (check) {
        int64_t arrived_work = 0;
        for (int64_t x : workload_backlog(arrivals_)) arrived_work += x;
        const int64_t extra =
            model_ == QueueModel::kOffline ? out.migrations : 0;
        if (weighted_total(q_) != backlog_before - actual_sum.total() +
                                      arrived_work + extra) {
          ++inv.workload;
        }
      }
    }
    if (check) {
      if (jobs_after != jobs_before + arrivals_.total() - completed) {
        ++inv.conservation;
      }
      ++inv.slots_checked;
    }
    metrics_.completions += completed;
    state_.prev = std::move(actual);
    return out;
  }

  const RunConfig& cfg_;
  const ClusterModel& cl_;
  int types_;
  int size_;
  QueueModel model_;
  ArrivalSampler sampler_;
  Rng arrival_rng_;
  Rng service_rng_;
  SchedulerState state_;
  SizeQueues q_;
  AgeQueues age_;
  ArrivalBatch arrivals_;
  RunMetrics metrics_;
};

}  // namespace

RunMetrics run(const RunConfig& config) {
  config.validate();
  Simulation sim(config);
  return sim.run();
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "rho") return SweepAxis::kRho;
  if (name == "V") return SweepAxis::kV;
  if (name == "U") return SweepAxis::kU;
  if (name == "alpha") return SweepAxis::kAlpha;
  throw ConfigError("unknown sweep axis '" + name +
                    "' (expected rho, V, U or alpha)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kRho: return "rho";
    case SweepAxis::kV: return "V";
    case SweepAxis::kU: return "U";
    case SweepAxis::kAlpha: return "alpha";
  }
  return "unknown";
}

RunConfig with_axis(const RunConfig& base, SweepAxis axis, double value) {
  RunConfig out = base;
  switch (axis) {
    case SweepAxis::kRho: out.rho = rational_from_double(value); break;
    case SweepAxis::kV: out.costs.V = value; break;
    case SweepAxis::kU: out.costs.U = value; break;
    case SweepAxis::kAlpha: out.costs.alpha = value; break;
  }
  return out;
}

namespace {

std::vector<RunConfig> sweep_configs(const RunConfig& base, SweepAxis axis,
                                     const std::vector<double>& values,
                                     int replications) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  std::vector<RunConfig> out;
  for (double v : values) {
    for (int r = 0; r < replications; ++r) {
      RunConfig c = with_axis(base, axis, v);
      c.seed = base.seed + static_cast<uint64_t>(r);
      c.validate();
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

std::vector<RunMetrics> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<double>& values,
                              int replications, int jobs) {
  const auto configs = sweep_configs(base, axis, values, replications);
  const int n = static_cast<int>(configs.size());
  std::vector<RunMetrics> rows(n);
  std::vector<std::exception_ptr> errors(n);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      rows[i] = run(configs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::vector<RunMetrics> sweep_serial(const RunConfig& base, SweepAxis axis,
                                     const std::vector<double>& values,
                                     int replications) {
  std::vector<RunMetrics> rows;
  for (const auto& c : sweep_configs(base, axis, values, replications)) {
    rows.push_back(run(c));
  }
  return rows;
}

}  // namespace cloudsched
