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

#include "cloudsched/queueing.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cloudsched/costs.hpp"

namespace cloudsched {
namespace {

ClassMatrix matrix(int types, int classes,
                   std::initializer_list<std::initializer_list<int64_t>> rows) {
  ClassMatrix out(types, classes);
  int m = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (int64_t v : row) out(m, j++) = v;
    ++m;
  }
  return out;
}

ClassMatrix random_matrix(std::mt19937_64& rng, int types, int classes,
                          int hi) {
  std::uniform_int_distribution<int> d(0, hi);
  ClassMatrix out(types, classes);
  for (auto& v : out.flat()) v = d(rng);
  return out;
}

ClassMatrix summed(const std::vector<ClassMatrix>& per_server) {
  return sum_over_servers(per_server, per_server[0].types(),
                          per_server[0].classes());
}

TEST(QueueingTest, RealizeKnownHandTrace) {
  const auto q = matrix(1, 2, {{2, 0}});
  const std::vector<ClassMatrix> prev = {matrix(1, 2, {{0, 2}})};
  const std::vector<ClassMatrix> presc = {matrix(1, 2, {{1, 0}})};
  const auto actual = realize_known(q, prev, presc);
  EXPECT_EQ(actual[0], matrix(1, 2, {{1, 0}}));
  EXPECT_EQ(migration_cost(prev[0], presc[0]), 1);
  EXPECT_EQ(migration_cost(prev[0], actual[0]), 1);
}

TEST(QueueingTest, RealizeKnownPerfectContinuation) {
  const auto q = matrix(1, 3, {{5, 5, 5}});
  const std::vector<ClassMatrix> prev = {matrix(1, 3, {{0, 1, 2}})};
  const std::vector<ClassMatrix> presc = {carry_known(prev[0])};
  EXPECT_EQ(presc[0], matrix(1, 3, {{1, 2, 0}}));
  const auto actual = realize_known(q, prev, presc);
  EXPECT_EQ(actual[0], presc[0]);
  EXPECT_EQ(migration_cost(prev[0], actual[0]), 0);
}

TEST(QueueingTest, RealizeKnownEmptyQueues) {
  const ClassMatrix q(2, 3);
  const std::vector<ClassMatrix> prev = {ClassMatrix(2, 3), ClassMatrix(2, 3)};
  const std::vector<ClassMatrix> presc = {matrix(2, 3, {{1, 1, 1}, {2, 0, 0}}),
                                          matrix(2, 3, {{0, 0, 3}, {0, 1, 0}})};
  for (const auto& n : realize_known(q, prev, presc)) EXPECT_TRUE(n.is_zero());
}

TEST(QueueingTest, RealizeKnownRejectsMissingCarriedJobs) {
  const auto q = matrix(1, 2, {{1, 0}});
  const std::vector<ClassMatrix> prev = {matrix(1, 2, {{0, 2}})};
  const std::vector<ClassMatrix> presc = {matrix(1, 2, {{2, 0}})};
  EXPECT_THROW(realize_known(q, prev, presc), ConsistencyError);
}

// Random instances that satisfy the carry precondition: the three
// realization guarantees hold, and the migration identity holds.
TEST(QueueingTest, RealizeKnownProperties) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int L = 1 + trial % 3;
    const int M = 1 + trial % 2;
    const int S = 1 + trial % 4;
    std::vector<ClassMatrix> prev, presc;
    for (int l = 0; l < L; ++l) {
      prev.push_back(random_matrix(rng, M, S, 2));
      presc.push_back(random_matrix(rng, M, S, 3));
    }
    ClassMatrix q = random_matrix(rng, M, S, 3);
    for (const auto& n : prev) q += carry_known(n);
    const auto actual = realize_known(q, prev, presc);
    ClassMatrix psum = summed(presc);
    ClassMatrix nsum = summed(actual);
    for (int m = 0; m < M; ++m) {
      for (int j = 0; j < S; ++j) {
        EXPECT_EQ(nsum(m, j), std::min(q(m, j), psum(m, j)));
        for (int l = 0; l < L; ++l) {
          const int64_t carry = carry_known(prev[l])(m, j);
          EXPECT_LE(actual[l](m, j), presc[l](m, j));
          EXPECT_GE(actual[l](m, j), std::min(carry, presc[l](m, j)));
        }
      }
    }
    for (int l = 0; l < L; ++l) {
      EXPECT_EQ(migration_cost(prev[l], actual[l]),
                migration_cost(prev[l], presc[l]));
    }
  }
}

TEST(QueueingTest, AdvanceKnownHandTrace) {
  const auto q = matrix(1, 2, {{2, 3}});
  const auto served = matrix(1, 2, {{1, 2}});
  const auto next = advance_known(q, served, ClassMatrix(1, 2));
  EXPECT_EQ(next, matrix(1, 2, {{3, 1}}));
}

TEST(QueueingTest, AdvanceKnownArrivalsOnly) {
  const auto a = matrix(2, 2, {{1, 0}, {3, 4}});
  EXPECT_EQ(advance_known(ClassMatrix(2, 2), ClassMatrix(2, 2), a), a);
}

TEST(QueueingTest, AdvanceKnownClampsOverPrescription) {
  const auto next = advance_known(matrix(1, 1, {{1}}), matrix(1, 1, {{5}}),
                                  ClassMatrix(1, 1));
  EXPECT_EQ(next(0, 0), 0);
}

// The update driven by the prescription equals the bookkeeping driven by
// the realized service, and jobs are conserved.
TEST(QueueingTest, AdvanceKnownConservesJobs) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int M = 1 + trial % 3;
    const int S = 1 + trial % 5;
    std::vector<ClassMatrix> prev = {random_matrix(rng, M, S, 2)};
    std::vector<ClassMatrix> presc = {random_matrix(rng, M, S, 4)};
    ClassMatrix q = random_matrix(rng, M, S, 3);
    q += carry_known(prev[0]);
    const ClassMatrix a = random_matrix(rng, M, S, 2);
    const auto actual = realize_known(q, prev, presc);
    const auto next = advance_known(q, presc[0], a);
    int64_t completions = 0;
    for (int m = 0; m < M; ++m) {
      completions += actual[0](m, 0);
      for (int j = 0; j < S; ++j) {
        EXPECT_EQ(next(m, j), q(m, j) - actual[0](m, j) + a(m, j) +
                                  actual[0].at_or_zero(m, j + 1));
      }
    }
    EXPECT_EQ(next.total(), q.total() + a.total() - completions);
  }
}

TEST(QueueingTest, CarryAgeAndRealizeUnknown) {
  const auto prev = matrix(1, 3, {{3, 0, 0}});
  const auto z = matrix(1, 3, {{1, 0, 0}});
  EXPECT_EQ(carry_age(prev, z), matrix(1, 3, {{0, 2, 0}}));
  const auto visible = matrix(1, 3, {{4, 6, 1}});
  const std::vector<ClassMatrix> np = {prev}, zp = {z};
  const std::vector<ClassMatrix> presc = {matrix(1, 3, {{0, 2, 0}})};
  EXPECT_EQ(realize_unknown(visible, np, zp, presc)[0], presc[0]);
  EXPECT_EQ(migration_cost_age(prev, z, presc[0]), 0);
  EXPECT_THROW(carry_age(z, prev), ConsistencyError);
}

TEST(QueueingTest, RealizeUnknownAllDeparted) {
  const auto prev = matrix(1, 2, {{2, 0}});
  const std::vector<ClassMatrix> np = {prev}, zp = {prev};
  const std::vector<ClassMatrix> presc = {matrix(1, 2, {{1, 0}})};
  EXPECT_EQ(realize_unknown(matrix(1, 2, {{3, 0}}), np, zp, presc)[0],
            presc[0]);
  const std::vector<ClassMatrix> none = {ClassMatrix(1, 2)};
  EXPECT_TRUE(
      realize_unknown(matrix(1, 2, {{3, 0}}), np, zp, none)[0].is_zero());
}

AgeQueues mixed_class() {
  AgeQueues q(1, 4);
  q.set_composition(0, 1, 1, 2);  // age 1, size 2: finish when served
  q.set_composition(0, 1, 3, 1);  // age 1, size 4
  return q;
}

TEST(QueueingTest, DeparturesServeWholeClass) {
  AgeQueues q = mixed_class();
  EXPECT_EQ(q.visible()(0, 1), 3);
  EXPECT_EQ(q.remaining_workload(), 2 * 1 + 3);
  Rng rng(3);
  const std::vector<ClassMatrix> served = {matrix(1, 4, {{0, 3, 0, 0}})};
  const auto z = sample_departures(served, q, rng);
  EXPECT_EQ(z[0](0, 1), 2);
  EXPECT_EQ(q.total_jobs(), 1);
  EXPECT_EQ(q.composition(0, 2, 3), 1);
  EXPECT_EQ(q.visible(), matrix(1, 4, {{0, 0, 1, 0}}));
}

TEST(QueueingTest, DeparturesServeNothing) {
  AgeQueues q = mixed_class();
  Rng rng(3);
  const std::vector<ClassMatrix> served = {ClassMatrix(1, 4)};
  EXPECT_TRUE(sample_departures(served, q, rng)[0].is_zero());
  EXPECT_EQ(q.visible()(0, 1), 3);
}

TEST(QueueingTest, DeparturesAreUniformSubsets) {
  Rng rng(99);
  const int trials = 30000;
  int ones = 0;
  for (int i = 0; i < trials; ++i) {
    AgeQueues q = mixed_class();
    const std::vector<ClassMatrix> served = {matrix(1, 4, {{0, 1, 0, 0}})};
    ones += sample_departures(served, q, rng)[0](0, 1) == 1;
  }
  EXPECT_NEAR(static_cast<double>(ones) / trials, 2.0 / 3.0, 0.015);
}

TEST(QueueingTest, DeparturesRejectUnderflow) {
  AgeQueues q = mixed_class();
  Rng rng(3);
  const std::vector<ClassMatrix> served = {matrix(1, 4, {{0, 4, 0, 0}})};
  EXPECT_THROW(sample_departures(served, q, rng), ConsistencyError);
}

TEST(QueueingTest, OldestAgeAlwaysDeparts) {
  AgeQueues q(1, 3);
  q.set_composition(0, 2, 2, 4);
  Rng rng(1);
  const std::vector<ClassMatrix> served = {matrix(1, 3, {{0, 0, 4}})};
  EXPECT_EQ(sample_departures(served, q, rng)[0](0, 2), 4);
  EXPECT_EQ(q.total_jobs(), 0);
}

TEST(QueueingTest, AdvanceUnknownCases) {
  const auto a = matrix(1, 3, {{1, 2, 0}});
  EXPECT_EQ(advance_unknown(matrix(1, 3, {{4, 0, 0}}), ClassMatrix(1, 3),
                            ClassMatrix(1, 3), a)(0, 0),
            7);
  const auto next = advance_unknown(matrix(1, 3, {{5, 0, 0}}),
                                    matrix(1, 3, {{2, 0, 0}}),
                                    matrix(1, 3, {{1, 0, 0}}),
                                    ClassMatrix(1, 3));
  EXPECT_EQ(next, matrix(1, 3, {{3, 1, 0}}));
  EXPECT_TRUE(advance_unknown(ClassMatrix(1, 3), ClassMatrix(1, 3),
                              ClassMatrix(1, 3), ClassMatrix(1, 3))
                  .is_zero());
  EXPECT_THROW(advance_unknown(matrix(1, 3, {{1, 0, 0}}),
                               matrix(1, 3, {{1, 0, 0}}),
                               matrix(1, 3, {{2, 0, 0}}), ClassMatrix(1, 3)),
               ConsistencyError);
}

// The visible counts produced by the hidden composition agree with the
// age-indexed update on random traces.
TEST(QueueingTest, AgeStateMatchesVisibleUpdate) {
  Rng rng(21);
  std::mt19937_64 pick(22);
  const int M = 2, S = 4, L = 2;
  AgeQueues hidden(M, S);
  std::vector<ClassMatrix> prev(L, ClassMatrix(M, S)), zprev(L, ClassMatrix(M, S));
  for (int t = 0; t < 500; ++t) {
    const ClassMatrix visible = hidden.visible();
    std::vector<ClassMatrix> presc;
    for (int l = 0; l < L; ++l) presc.push_back(random_matrix(pick, M, S, 2));
    const auto actual = realize_unknown(visible, prev, zprev, presc);
    const auto z = sample_departures(actual, hidden, rng);
    const ClassMatrix a = random_matrix(pick, M, S, 1);
    const ClassMatrix expect =
        advance_unknown(visible, summed(presc), summed(z), a);
    hidden.add_arrivals(a);
    ASSERT_EQ(hidden.visible(), expect) << "slot " << t;
    prev = actual;
    zprev = z;
  }
}

TEST(QueueingTest, OfflinePreemptedJobReenters) {
  const auto q = matrix(1, 3, {{1, 0, 0}});
  const std::vector<ClassMatrix> prev = {matrix(1, 3, {{0, 1, 0}})};
  const std::vector<ClassMatrix> now = {ClassMatrix(1, 3)};
  const auto next = advance_offline(q, now, prev, ClassMatrix(1, 3));
  EXPECT_EQ(next, matrix(1, 3, {{0, 1, 0}}));
}

TEST(QueueingTest, OfflineWithoutMigrationMatchesKnown) {
  const auto q = matrix(1, 3, {{2, 1, 4}});
  const std::vector<ClassMatrix> prev = {matrix(1, 3, {{0, 2, 1}})};
  const std::vector<ClassMatrix> now = {matrix(1, 3, {{2, 1, 0}})};
  const auto a = matrix(1, 3, {{1, 1, 1}});
  EXPECT_EQ(advance_offline(q, now, prev, a), advance_known(q, now[0], a));
}

TEST(QueueingTest, OfflinePoolExcludesRunningJobs) {
  const auto q = matrix(1, 2, {{3, 0}});
  const std::vector<ClassMatrix> prev = {ClassMatrix(1, 2),
                                         matrix(1, 2, {{0, 2}})};
  const std::vector<ClassMatrix> presc = {matrix(1, 2, {{3, 0}}),
                                          ClassMatrix(1, 2)};
  const auto actual = realize_offline(q, prev, presc);
  EXPECT_EQ(actual[0](0, 0), 1);
  EXPECT_EQ(actual[1](0, 0), 0);
}

// Weighted backlog grows by exactly one unit per offline migration.
TEST(QueueingTest, OfflineWorkloadIdentity) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int M = 1 + trial % 2, S = 2 + trial % 3, L = 1 + trial % 3;
    ClassMatrix q = random_matrix(rng, M, S, 4);
    std::vector<ClassMatrix> prev(L, ClassMatrix(M, S));
    for (int t = 0; t < 100; ++t) {
      std::vector<ClassMatrix> presc;
      for (int l = 0; l < L; ++l) presc.push_back(random_matrix(rng, M, S, 2));
      const auto actual = realize_offline(q, prev, presc);
      const ClassMatrix a = random_matrix(rng, M, S, 1);
      const auto next = advance_offline(q, actual, prev, a);
      const auto before = workload_backlog(q);
      const auto after = workload_backlog(next);
      const auto arrived = workload_backlog(a);
      for (int m = 0; m < M; ++m) {
        int64_t served = 0, migrations = 0;
        for (int l = 0; l < L; ++l) {
          served += actual[l].row_total(m);
          for (int j = 0; j + 1 < S; ++j) {
            migrations +=
                positive_part(prev[l](m, j + 1) - actual[l](m, j));
          }
        }
        ASSERT_EQ(after[m], before[m] - served + arrived[m] + migrations);
      }
      for (int64_t v : next.flat()) ASSERT_GE(v, 0);
      q = next;
      prev = actual;
    }
  }
}

TEST(QueueingTest, DumpFormat) {
  std::ostringstream out;
  write_dump(out, matrix(2, 2, {{0, 3}, {1, 0}}));
  EXPECT_EQ(out.str(), "1 2 3\n2 1 1\n");
  std::ostringstream age;
  write_dump(age, matrix(1, 2, {{5, 0}}), true);
  EXPECT_EQ(age.str(), "1 0 5\n");
}

}  // namespace
}  // namespace cloudsched
