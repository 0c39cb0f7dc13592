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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "cloudsched/experiment.hpp"
#include "cloudsched/optimum.hpp"

namespace cloudsched {
namespace {

RunConfig base_config(SchedulerKind kind, int64_t horizon) {
  RunConfig rc;
  rc.cluster = reference_cluster();
  rc.scheduler = kind;
  rc.costs.model = CostModel::kBinary;
  rc.costs.c0 = 1;
  rc.costs.V = 5;
  rc.costs.U = 10;
  rc.costs.alpha = 0.1;
  rc.horizon = horizon;
  rc.warmup = horizon / 5;
  rc.seed = 11;
  return rc;
}

const SchedulerKind kAllKinds[] = {
    SchedulerKind::kAlg1,        SchedulerKind::kAlg2,
    SchedulerKind::kQbmw,        SchedulerKind::kRefinedQbmw,
    SchedulerKind::kPreemptive,  SchedulerKind::kNonpreemptive};

TEST(EngineTest, NoArrivalsNoActivity) {
  for (SchedulerKind kind : kAllKinds) {
    RunConfig rc = base_config(kind, 500);
    rc.rho = Rational(0);
    const RunMetrics m = run(rc);
    EXPECT_EQ(m.mean_queue_len, 0.0) << to_string(kind);
    EXPECT_EQ(m.mean_weighted_backlog, 0.0);
    EXPECT_EQ(m.mean_server_cost, 0.0);
    EXPECT_EQ(m.mean_active_servers, 0.0);
    EXPECT_EQ(m.mean_migrations, 0.0);
    EXPECT_EQ(m.mean_migration_cost, 0.0);
    EXPECT_EQ(m.arrivals, 0);
  }
}

TEST(EngineTest, RunsAreDeterministic) {
  for (SchedulerKind kind : kAllKinds) {
    const RunConfig rc = base_config(kind, 3000);
    const RunMetrics a = run(rc);
    const RunMetrics b = run(rc);
    EXPECT_EQ(csv_row(a), csv_row(b)) << to_string(kind);
    EXPECT_EQ(a.quarter_queue_len, b.quarter_queue_len);
    EXPECT_EQ(a.final_queue_len, b.final_queue_len);
    RunConfig other = rc;
    other.seed = 12;
    EXPECT_NE(run(other).arrivals, a.arrivals);
  }
}

TEST(EngineTest, TraceInvariantsHoldForEveryScheduler) {
  for (SchedulerKind kind : kAllKinds) {
    for (double rho : {0.5, 0.95}) {
      RunConfig rc = base_config(kind, 4000);
      rc.rho = rational_from_double(rho);
      const RunMetrics m = run(rc);
      EXPECT_EQ(m.invariants.slots_checked, 4000) << to_string(kind);
      EXPECT_EQ(m.invariants.total(), 0) << to_string(kind);
      EXPECT_LE(m.mean_active_servers, 10.0);
      EXPECT_EQ(m.arrivals - m.completions, m.final_queue_len);
    }
  }
}

TEST(EngineTest, BinaryCostCountsActiveServers) {
  for (SchedulerKind kind : kAllKinds) {
    const RunMetrics m = run(base_config(kind, 3000));
    EXPECT_EQ(m.mean_server_cost, m.mean_active_servers) << to_string(kind);
  }
}

TEST(EngineTest, NonpreemptiveNeverMigrates) {
  RunConfig rc = base_config(SchedulerKind::kNonpreemptive, 20000);
  rc.rho = Rational(9, 10);
  const RunMetrics m = run(rc);
  EXPECT_EQ(m.mean_migrations, 0.0);
  EXPECT_EQ(m.mean_migration_cost, 0.0);
  EXPECT_GT(m.completions, 0);
}

TEST(EngineTest, QbmwIntervalsRespectLowerBound) {
  RunConfig rc = base_config(SchedulerKind::kQbmw, 20000);
  rc.costs.V = 10;
  const RunMetrics m = run(rc);
  EXPECT_TRUE(m.interval_check.any);
  EXPECT_GT(m.interval_check.intervals, 0);
  EXPECT_EQ(m.interval_check.violations, 0);
  EXPECT_GE(m.interval_check.min_slack, 0.0);
}

TEST(EngineTest, ServerCostNotBelowStaticOptimum) {
  RunConfig rc = base_config(SchedulerKind::kAlg1, 60000);
  rc.costs.model = CostModel::kAffine;
  rc.costs.c = {2, 6, 3};
  rc.costs.V = 20;
  const RunMetrics m = run(rc);
  const double lp = to_double(
      solve_static_cost(rates_for(rc), rc.cluster, rc.costs).value);
  EXPECT_GE(m.mean_server_cost, lp * 0.97);
}

TEST(EngineTest, BacklogStableAcrossHorizonDoubling) {
  RunConfig rc = base_config(SchedulerKind::kAlg1, 200000);
  rc.costs.model = CostModel::kAffine;
  rc.costs.c = {2, 6, 3};
  const RunMetrics shorter = run(rc);
  rc.horizon *= 2;
  rc.warmup = rc.horizon / 5;
  const RunMetrics longer = run(rc);
  const double drift =
      std::abs(longer.mean_weighted_backlog - shorter.mean_weighted_backlog) /
      shorter.mean_weighted_backlog;
  EXPECT_LT(drift, 0.05);
}

TEST(EngineTest, SweepRowsAndSeeds) {
  const RunConfig rc = base_config(SchedulerKind::kAlg1, 1000);
  const auto one = sweep(rc, SweepAxis::kV, {3.0}, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(csv_row(one[0]), csv_row(run(with_axis(rc, SweepAxis::kV, 3.0))));

  const auto rows = sweep(rc, SweepAxis::kRho, {0.3, 0.6}, 5, 2);
  ASSERT_EQ(rows.size(), 10u);
  std::set<uint64_t> seeds;
  for (int r = 0; r < 5; ++r) {
    seeds.insert(rows[r].seed);
    EXPECT_EQ(rows[r].seed, rows[5 + r].seed);
    EXPECT_EQ(rows[r].rho, 0.3);
    EXPECT_EQ(rows[5 + r].rho, 0.6);
  }
  EXPECT_EQ(seeds.size(), 5u);
  const auto serial = sweep_serial(rc, SweepAxis::kRho, {0.3, 0.6}, 5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(csv_row(rows[i]), csv_row(serial[i]));
  }
}

TEST(EngineTest, SweepAxes) {
  const RunConfig rc = base_config(SchedulerKind::kQbmw, 100);
  EXPECT_EQ(with_axis(rc, SweepAxis::kAlpha, 0.3).costs.alpha, 0.3);
  EXPECT_EQ(with_axis(rc, SweepAxis::kU, 7).costs.U, 7.0);
  EXPECT_EQ(with_axis(rc, SweepAxis::kRho, 0.8).rho, Rational(4, 5));
  EXPECT_EQ(parse_axis("alpha"), SweepAxis::kAlpha);
  EXPECT_THROW(parse_axis("beta"), ConfigError);
  EXPECT_THROW(sweep(rc, SweepAxis::kV, {}, 1), ConfigError);
}

TEST(EngineTest, ConfigValidation) {
  RunConfig rc = base_config(SchedulerKind::kAlg1, 100);
  rc.warmup = 100;
  EXPECT_THROW(run(rc), ConfigError);
  rc = base_config(SchedulerKind::kNonpreemptive, 100);
  rc.frame_len = 5;
  EXPECT_THROW(run(rc), ConfigError);
  rc = base_config(SchedulerKind::kAlg1, 100);
  rc.rho = Rational(100);
  EXPECT_THROW(run(rc), ConfigError);  // rates exceed A_max
  EXPECT_THROW(parse_scheduler("fifo"), ConfigError);
}

TEST(EngineTest, UniformShapeHitsBoundaryAtOne) {
  RunConfig rc = base_config(SchedulerKind::kAlg1, 100);
  rc.cluster = ClusterModel::identical(
      10, feasible_from_maximal({{0, 1}, {3, 0}}), 10);
  rc.rate_shape = RateShape::kUniform;
  rc.rho = Rational(1);
  EXPECT_EQ(capacity_boundary(rates_for(rc), rc.cluster), Rational(1));
}

}  // namespace
}  // namespace cloudsched
