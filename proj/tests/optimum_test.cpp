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

#include <array>
#include <random>

#include <gtest/gtest.h>

#include "cloudsched/experiment.hpp"
#include "cloudsched/simplex.hpp"

namespace cloudsched {
namespace {

Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

TEST(SimplexTest, TextbookMaximum) {
  LinearProgram lp;
  lp.objective = {3, 5};
  lp.add_row({1, 0}, RowSense::kLessEqual, 4);
  lp.add_row({0, 2}, RowSense::kLessEqual, 12);
  lp.add_row({3, 2}, RowSense::kLessEqual, 18);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.value, Rational(36));
  EXPECT_EQ(s.x[0], Rational(2));
  EXPECT_EQ(s.x[1], Rational(6));
}

TEST(SimplexTest, EqualityAndGreaterRows) {
  LinearProgram lp;
  lp.objective = {-1, -1};
  lp.add_row({1, 1}, RowSense::kEqual, 3);
  lp.add_row({1, 0}, RowSense::kGreaterEqual, 1);
  lp.add_row({1, -1}, RowSense::kLessEqual, 0);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.value, Rational(-3));
}

TEST(SimplexTest, InfeasibleAndUnbounded) {
  LinearProgram bad;
  bad.objective = {1};
  bad.add_row({1}, RowSense::kGreaterEqual, 2);
  bad.add_row({1}, RowSense::kLessEqual, 1);
  EXPECT_EQ(solve_lp(bad).status, LpStatus::kInfeasible);
  LinearProgram open;
  open.objective = {1, 0};
  open.add_row({1, -1}, RowSense::kLessEqual, 1);
  EXPECT_EQ(solve_lp(open).status, LpStatus::kUnbounded);
}

TEST(SimplexTest, RedundantEqualities) {
  LinearProgram lp;
  lp.objective = {1, 2};
  lp.add_row({1, 1}, RowSense::kEqual, 2);
  lp.add_row({2, 2}, RowSense::kEqual, 4);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.value, Rational(4));
}

// Two-variable LPs checked against vertex enumeration.
TEST(SimplexTest, RandomPlanarAgainstVertices) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    LinearProgram lp;
    lp.objective = {Rational(d(rng) - 3), Rational(d(rng) - 3)};
    const int rows = 2 + trial % 3;
    for (int i = 0; i < rows; ++i) {
      lp.add_row({Rational(d(rng)), Rational(d(rng))}, RowSense::kLessEqual,
                 Rational(d(rng) * 3));
    }
    // Lines: each row plus the two axes.
    std::vector<std::array<Rational, 3>> lines;
    for (int i = 0; i < rows; ++i) {
      lines.push_back({lp.rows[i][0], lp.rows[i][1], lp.rhs[i]});
    }
    lines.push_back({Rational(1), Rational(0), Rational(0)});
    lines.push_back({Rational(0), Rational(1), Rational(0)});
    bool found = false;
    Rational best;
    for (std::size_t a = 0; a < lines.size(); ++a) {
      for (std::size_t b = a + 1; b < lines.size(); ++b) {
        const Rational det =
            lines[a][0] * lines[b][1] - lines[a][1] * lines[b][0];
        if (det == 0) continue;
        const Rational x =
            (lines[a][2] * lines[b][1] - lines[a][1] * lines[b][2]) / det;
        const Rational y =
            (lines[a][0] * lines[b][2] - lines[a][2] * lines[b][0]) / det;
        if (x < 0 || y < 0) continue;
        bool ok = true;
        for (int i = 0; i < rows; ++i) {
          ok = ok && lp.rows[i][0] * x + lp.rows[i][1] * y <= lp.rhs[i];
        }
        if (!ok) continue;
        const Rational v = lp.objective[0] * x + lp.objective[1] * y;
        if (!found || v > best) best = v;
        found = true;
      }
    }
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_EQ(s.value, best);
  }
}

CostParams binary() {
  CostParams p;
  p.model = CostModel::kBinary;
  p.c0 = 1;
  return p;
}

CostParams affine() {
  CostParams p;
  p.model = CostModel::kAffine;
  p.c0 = 1;
  p.c = {2, 6, 3};
  return p;
}

RateMatrix reference_rates(const Rational& rho) {
  return build_reference_rates(10, rho, 3, 10);
}

TEST(OptimumTest, ZeroWorkloadCostsNothing) {
  const ClusterModel cluster = reference_cluster();
  const auto r = solve_static_cost(reference_rates(Rational(0)), cluster,
                                   affine());
  EXPECT_EQ(r.value, Rational(0));
  for (const auto& mix : r.policy.mixture) {
    EXPECT_EQ(mix[0], Rational(1));  // the zero config sorts first
  }
}

TEST(OptimumTest, BinaryReferenceValue) {
  const auto r = solve_static_cost(reference_rates(Rational(4, 5)),
                                   reference_cluster(), binary());
  EXPECT_EQ(r.value, Rational(8));
}

TEST(OptimumTest, AffineReferenceValue) {
  // Dynamic cost alone is 2(8/3) + 6(16/3) + 3(8) = 184/3; the static part
  // adds 8 active servers.
  const auto r = solve_static_cost(reference_rates(Rational(4, 5)),
                                   reference_cluster(), affine());
  EXPECT_EQ(r.value, Rational(208, 3));
}

TEST(OptimumTest, SingleConfigCost) {
  const ClusterModel cluster = ClusterModel::identical(1, {{0}, {1}}, 1);
  CostParams p = binary();
  p.c0 = 3;
  const auto r =
      solve_static_cost(std::vector<Rational>{frac(1, 2)}, cluster, p);
  EXPECT_EQ(r.value, frac(3, 2));
}

TEST(OptimumTest, InfeasibleWorkload) {
  EXPECT_THROW(solve_static_cost(reference_rates(frac(101, 100)),
                                 reference_cluster(), binary()),
               InfeasibleError);
}

TEST(OptimumTest, PolicyInvariants) {
  const ClusterModel cluster = reference_cluster();
  for (int k = 1; k <= 10; ++k) {
    const RateMatrix rates = reference_rates(frac(k, 10));
    const auto r = solve_static_cost(rates, cluster, affine());
    EXPECT_EQ(policy_cost(r.policy, cluster, affine()), r.value);
    std::vector<Rational> served(3, Rational(0));
    for (int l = 0; l < cluster.servers(); ++l) {
      Rational mass(0);
      for (std::size_t i = 0; i < r.policy.mixture[l].size(); ++i) {
        const Rational& p = r.policy.mixture[l][i];
        EXPECT_GE(p, 0);
        mass += p;
        for (int m = 0; m < 3; ++m) served[m] += p * cluster.feasible(l)[i][m];
      }
      EXPECT_EQ(mass, Rational(1));
      // Each server carries its share of the rates.
      const auto share = workload_rate(r.policy.rate_split[l]);
      for (int m = 0; m < 3; ++m) {
        Rational offered(0);
        for (std::size_t i = 0; i < r.policy.mixture[l].size(); ++i) {
          offered += r.policy.mixture[l][i] * cluster.feasible(l)[i][m];
        }
        EXPECT_LE(share[m], offered);
      }
    }
    const auto need = workload_rate(rates);
    for (int m = 0; m < 3; ++m) EXPECT_GE(served[m], need[m]);
    for (int m = 0; m < 3; ++m) {
      for (int j = 0; j < 10; ++j) {
        Rational total(0);
        for (const auto& part : r.policy.rate_split) total += part.at(m, j);
        EXPECT_EQ(total, rates.at(m, j));
      }
    }
  }
}

TEST(OptimumTest, ValueIsMonotoneAlongRay) {
  const ClusterModel cluster = reference_cluster();
  Rational last(-1);
  for (int k = 0; k <= 10; ++k) {
    const Rational v =
        solve_static_cost(reference_rates(frac(k, 10)), cluster, affine())
            .value;
    EXPECT_GE(v, last);
    last = v;
  }
}

TEST(OptimumTest, ValueIsMonotoneInEachCoordinate) {
  const ClusterModel cluster = reference_cluster();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 20);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rational> w = {frac(d(rng), 10), frac(d(rng), 10),
                               frac(d(rng), 10)};
    Rational base;
    try {
      base = solve_static_cost(w, cluster, affine()).value;
    } catch (const InfeasibleError&) {
      continue;
    }
    for (int m = 0; m < 3; ++m) {
      std::vector<Rational> more = w;
      more[m] += frac(1, 10);
      try {
        EXPECT_GE(solve_static_cost(more, cluster, affine()).value, base);
      } catch (const InfeasibleError&) {
      }
    }
  }
}

TEST(OptimumTest, CapacityBoundaryReference) {
  const ClusterModel cluster = reference_cluster();
  const Rational star = capacity_boundary(reference_rates(Rational(1)),
                                          cluster);
  EXPECT_EQ(star, Rational(1));
  // Just inside is feasible, just outside is not.
  const auto w = workload_rate(reference_rates(Rational(1)));
  const Rational delta = frac(1, 1000);
  std::vector<Rational> inside, outside;
  for (const auto& x : w) {
    inside.push_back(x * (star - delta));
    outside.push_back(x * (star + delta));
  }
  EXPECT_NO_THROW(solve_static_cost(inside, cluster, binary()));
  EXPECT_THROW(solve_static_cost(outside, cluster, binary()), InfeasibleError);
}

TEST(OptimumTest, CapacityBoundaryUnservedType) {
  const ClusterModel cluster = ClusterModel::identical(2, {{0, 0}, {1, 0}}, 1);
  EXPECT_EQ(capacity_boundary(std::vector<Rational>{Rational(0), Rational(1)},
                              cluster),
            Rational(0));
  EXPECT_THROW(capacity_boundary(
                   std::vector<Rational>{Rational(0), Rational(0)}, cluster),
               ConfigError);
}

TEST(OptimumTest, HalvingCapacityHalvesBoundary) {
  const std::vector<ResourceVector> demands = {
      ResourceVector({Rational(1), Rational(2)}),
      ResourceVector({Rational(2), Rational(1)})};
  const auto big = ClusterModel::identical(
      3, feasible_from_resources(ResourceVector({Rational(4), Rational(4)}),
                                 demands),
      2);
  const auto small = ClusterModel::identical(
      3, feasible_from_resources(ResourceVector({Rational(2), Rational(2)}),
                                 demands),
      2);
  const std::vector<Rational> dir = {Rational(1), Rational(1)};
  EXPECT_EQ(capacity_boundary(dir, small) * 2, capacity_boundary(dir, big));
}

TEST(OptimumTest, UniformSlack) {
  const ClusterModel cluster = reference_cluster();
  const auto w = workload_rate(reference_rates(frac(4, 5)));
  const Rational eps = max_uniform_slack(w, cluster);
  EXPECT_GT(eps, 0);
  std::vector<Rational> edge;
  for (const auto& x : w) edge.push_back(x + eps);
  EXPECT_NO_THROW(solve_static_cost(edge, cluster, binary()));
  for (auto& x : edge) x += frac(1, 1000);
  EXPECT_THROW(solve_static_cost(edge, cluster, binary()), InfeasibleError);
  const auto over = workload_rate(reference_rates(frac(11, 10)));
  EXPECT_LT(max_uniform_slack(over, cluster), 0);
}

TEST(OptimumTest, BoundConstants) {
  BoundParams unit{1, 1, 1, 1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(performance_bounds(unit).B2, 1.5);
  BoundParams ref{10, 3, 10, 10, 3, 10, 5};
  const PerformanceBounds b = performance_bounds(ref);
  EXPECT_DOUBLE_EQ(b.B4, 9270.0);
  EXPECT_DOUBLE_EQ(b.migration_bound(), 927.0);
  EXPECT_DOUBLE_EQ(b.k0, 1.0 / (3.0 * (9.0 + 3.0 * 100.0 * 10.0 * 3.0)));
  EXPECT_DOUBLE_EQ(b.queue_bound(2.0, 4.0),
                   (b.B2 + 10.0 * 10.0 * 3.0 + 5.0 * 4.0) / 2.0);
  EXPECT_DOUBLE_EQ(b.cost_bound(4.0), (b.B2 + 300.0) / 5.0 + 4.0);
  EXPECT_THROW(b.queue_bound(0.0, 1.0), ConfigError);
  BoundParams bad = ref;
  bad.max_vms = 0;
  EXPECT_THROW(performance_bounds(bad), ConfigError);
}

}  // namespace
}  // namespace cloudsched
