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

#include "cloudsched/workload.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace cloudsched {
namespace {

TEST(WorkloadTest, ReferenceRates) {
  const RateMatrix r = build_reference_rates(10, Rational(4, 5), 3, 10);
  EXPECT_EQ(r.at(2, 0), Rational(8, 55));
  EXPECT_EQ(r.at(2, 9), Rational(8, 55));
  EXPECT_NEAR(r.value(2, 4), 0.145454545, 1e-9);
  EXPECT_EQ(r.at(0, 3), Rational(8, 165));
}

TEST(WorkloadTest, ZeroRho) {
  EXPECT_TRUE(build_reference_rates(10, Rational(0), 3, 10).is_zero());
}

TEST(WorkloadTest, WorkloadRateAtUnitRho) {
  const auto w = workload_rate(build_reference_rates(10, Rational(1), 3, 10));
  for (int m = 0; m < 3; ++m) {
    Rational expect(10 * (m + 1), 3);
    expect.canonicalize();
    EXPECT_EQ(w[m], expect);
  }
}

TEST(WorkloadTest, WorkloadRateAtFourFifths) {
  const auto w = workload_rate(build_reference_rates(10, Rational(4, 5), 3, 10));
  EXPECT_EQ(w[0], Rational(8, 3));
  EXPECT_EQ(w[1], Rational(16, 3));
  EXPECT_EQ(w[2], Rational(8));
}

TEST(WorkloadTest, WorkloadRateSingleEntry) {
  RateMatrix r(1, 3);
  EXPECT_EQ(workload_rate(r)[0], Rational(0));
  r.set(0, 1, Rational(1, 2));
  EXPECT_EQ(workload_rate(r)[0], Rational(1));
}

TEST(WorkloadTest, RejectsRateAboveBound) {
  RateMatrix r(1, 1);
  r.set(0, 0, Rational(3));
  EXPECT_THROW(ArrivalSampler(r, 2), ConfigError);
  EXPECT_THROW(r.set(0, 0, Rational(-1)), ConfigError);
}

TEST(WorkloadTest, ZeroRatesGiveEmptyBatches) {
  RateMatrix r(2, 3);
  ArrivalSampler sampler(r, 10);
  Rng rng(1);
  ArrivalBatch batch(2, 3);
  for (int t = 0; t < 1000; ++t) {
    sampler.sample(rng, batch);
    EXPECT_TRUE(batch.is_zero());
  }
}

TEST(WorkloadTest, EmpiricalMeansAndSupport) {
  RateMatrix r(1, 2);
  r.set(0, 0, Rational(8, 55));
  r.set(0, 1, Rational(7, 2));
  const int a_max = 10;
  ArrivalSampler sampler(r, a_max);
  Rng rng(mix_seed(42, 0));
  ArrivalBatch batch(1, 2);
  const int slots = 1'000'000;
  double sum[2] = {0, 0};
  int64_t zeros[2] = {0, 0};
  for (int t = 0; t < slots; ++t) {
    sampler.sample(rng, batch);
    for (int j = 0; j < 2; ++j) {
      ASSERT_GE(batch(0, j), 0);
      ASSERT_LE(batch(0, j), a_max);
      sum[j] += batch(0, j);
      zeros[j] += batch(0, j) == 0;
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double lambda = r.value(0, j);
    const double p = lambda / a_max;
    const double se = std::sqrt(a_max * p * (1 - p) / slots);
    EXPECT_NEAR(sum[j] / slots, lambda, 3 * se) << "size " << j + 1;
    EXPECT_GT(zeros[j], 0);
  }
}

TEST(WorkloadTest, SameSeedSameSequence) {
  const RateMatrix r = build_reference_rates(10, Rational(4, 5), 3, 10);
  Rng a(mix_seed(5, 0));
  Rng b(mix_seed(5, 0));
  Rng c(mix_seed(5, 1));
  bool differs = false;
  for (int t = 0; t < 200; ++t) {
    const auto x = sample_arrivals(r, 10, a);
    EXPECT_EQ(x, sample_arrivals(r, 10, b));
    differs = differs || x != sample_arrivals(r, 10, c);
  }
  EXPECT_TRUE(differs);
}

TEST(WorkloadTest, ScaledRates) {
  const RateMatrix r = build_reference_rates(10, Rational(1), 3, 10);
  EXPECT_EQ(r.scaled(Rational(4, 5)).at(1, 3),
            build_reference_rates(10, Rational(4, 5), 3, 10).at(1, 3));
}

}  // namespace
}  // namespace cloudsched
