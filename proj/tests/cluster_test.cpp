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

#include "cloudsched/cluster.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "cloudsched/experiment.hpp"

namespace cloudsched {
namespace {

TEST(ClusterTest, ReferenceClusterMembership) {
  const ClusterModel cluster = reference_cluster();
  EXPECT_TRUE(is_feasible({0, 0, 0}, cluster, 0));
  EXPECT_TRUE(is_feasible({0, 0, 2}, cluster, 3));
  EXPECT_TRUE(is_feasible({1, 1, 0}, cluster, 9));
  EXPECT_FALSE(is_feasible({1, 1, 1}, cluster, 0));
  EXPECT_FALSE(is_feasible({0, 0, 3}, cluster, 0));
  EXPECT_THROW(is_feasible({0, 0, 0}, cluster, 10), std::out_of_range);
}

TEST(ClusterTest, ReferenceClusterShape) {
  const ClusterModel cluster = reference_cluster();
  EXPECT_EQ(cluster.servers(), 10);
  EXPECT_EQ(cluster.vm_types(), 3);
  EXPECT_EQ(cluster.max_job_size(), 10);
  EXPECT_EQ(cluster.max_vms(), 2);
  EXPECT_EQ(cluster.feasible(0).size(), 7u);
  EXPECT_EQ(cluster.max_count(0, 0), 1);
  EXPECT_EQ(cluster.max_count(0, 2), 2);
  EXPECT_TRUE(std::is_sorted(cluster.feasible(0).begin(),
                             cluster.feasible(0).end()));
}

TEST(ClusterTest, ResourcesSingleType) {
  const ConfigSet set = feasible_from_resources(
      ResourceVector({Rational(5, 2)}), {ResourceVector({Rational(1)})});
  ASSERT_EQ(set.size(), 3u);
  EXPECT_EQ(set[2], (AggregateConfig{2}));
}

TEST(ClusterTest, ResourcesRejectFreeType) {
  EXPECT_THROW(feasible_from_resources(ResourceVector({Rational(1)}),
                                       {ResourceVector({Rational(0)})}),
               ConfigError);
}

TEST(ClusterTest, RejectsNonClosedSet) {
  EXPECT_THROW(ClusterModel::identical(1, {{0}, {2}}, 1), ConfigError);
  EXPECT_THROW(ClusterModel::identical(1, {{1}}, 1), ConfigError);
}

Rational frac(int num, int den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

ConfigSet maximal_elements(const ConfigSet& set) {
  ConfigSet out;
  for (const auto& w : set) {
    bool dominated = false;
    for (const auto& v : set) {
      if (v != w && w.dominated_by(v)) dominated = true;
    }
    if (!dominated) out.push_back(w);
  }
  return out;
}

// Random resource models: the downward closure of the maximal points equals
// the resource-derived set, and every set is downward closed.
TEST(ClusterTest, RandomResourceModelsAgreeWithMaximalClosure) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = small(rng) % 2 + 1;
    const int types = small(rng) % 3 + 1;
    std::vector<Rational> cap;
    for (int r = 0; r < k; ++r) cap.push_back(frac(small(rng) + 2, small(rng)));
    std::vector<ResourceVector> demands;
    for (int m = 0; m < types; ++m) {
      std::vector<Rational> d;
      for (int r = 0; r < k; ++r) d.push_back(frac(small(rng), small(rng)));
      demands.emplace_back(d);
    }
    const ConfigSet set = feasible_from_resources(ResourceVector(cap), demands);
    EXPECT_EQ(feasible_from_maximal(maximal_elements(set)), set);
    const ClusterModel cluster = ClusterModel::identical(2, set, 3);
    for (const auto& w : set) {
      EXPECT_LE(w.total(), cluster.max_vms());
      for (int m = 0; m < types; ++m) {
        if (w[m] == 0) continue;
        std::vector<int> lower = w.counts();
        --lower[m];
        EXPECT_TRUE(is_feasible(AggregateConfig(lower), cluster, 1));
      }
    }
  }
}

TEST(ClusterTest, HeterogeneousServers) {
  const ClusterModel cluster({{{0}, {1}}, {{0}, {1}, {2}, {3}}}, 2);
  EXPECT_FALSE(cluster.identical_servers());
  EXPECT_FALSE(is_feasible({2}, cluster, 0));
  EXPECT_TRUE(is_feasible({2}, cluster, 1));
  EXPECT_EQ(cluster.max_vms(), 3);
}

}  // namespace
}  // namespace cloudsched
