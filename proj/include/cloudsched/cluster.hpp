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

// Server resource model and the per-server sets of feasible VM
// configurations.

#ifndef CLOUDSCHED_CLUSTER_HPP_
#define CLOUDSCHED_CLUSTER_HPP_

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "cloudsched/rational.hpp"

namespace cloudsched {

// Amounts of each of K resources. Entries are exact non-negative rationals.
class ResourceVector {
 public:
  ResourceVector() = default;
  explicit ResourceVector(std::vector<Rational> amounts);

  std::size_t size() const { return amounts_.size(); }
  const Rational& operator[](std::size_t k) const { return amounts_[k]; }

 private:
  std::vector<Rational> amounts_;
};

// Number of VMs of each type hosted simultaneously on one server.
class AggregateConfig {
 public:
  AggregateConfig() = default;
  explicit AggregateConfig(std::vector<int> counts);
  AggregateConfig(std::initializer_list<int> counts)
      : AggregateConfig(std::vector<int>(counts)) {}

  int types() const { return static_cast<int>(counts_.size()); }
  int operator[](int m) const { return counts_[m]; }
  int total() const;
  bool is_zero() const { return total() == 0; }
  // Componentwise <=.
  bool dominated_by(const AggregateConfig& other) const;
  const std::vector<int>& counts() const { return counts_; }

  friend bool operator==(const AggregateConfig&,
                         const AggregateConfig&) = default;
  friend auto operator<=>(const AggregateConfig& a, const AggregateConfig& b) {
    return a.counts_ <=> b.counts_;
  }

 private:
  std::vector<int> counts_;
};

using ConfigSet = std::vector<AggregateConfig>;

// All integer eta >= 0 with sum_m eta_m R_{m,k} <= C_k for every resource k,
// sorted lexicographically. Throws ConfigError when some VM type demands
// nothing of every resource (the set would be infinite).
ConfigSet feasible_from_resources(const ResourceVector& capacity,
                                  const std::vector<ResourceVector>& demands);

// Downward closure of `maximal`, deduplicated and sorted.
ConfigSet feasible_from_maximal(const ConfigSet& maximal);

// L servers, M VM types, maximum job size S, and each server's feasible set.
// Immutable once built.
class ClusterModel {
 public:
  // Heterogeneous servers: one feasible set per server.
  ClusterModel(std::vector<ConfigSet> per_server, int max_job_size);
  // L identical servers.
  static ClusterModel identical(int servers, ConfigSet feasible,
                                int max_job_size);

  int servers() const { return static_cast<int>(server_set_.size()); }
  int vm_types() const { return vm_types_; }
  int max_job_size() const { return max_job_size_; }
  int max_vms() const { return max_vms_; }
  bool identical_servers() const { return sets_.size() == 1; }

  const ConfigSet& feasible(int server) const;
  // Largest W_m over the server's feasible set.
  int max_count(int server, int m) const;

 private:
  ClusterModel() = default;
  void finish();

  std::vector<ConfigSet> sets_;
  std::vector<std::size_t> server_set_;
  std::vector<std::vector<int>> max_count_;
  int vm_types_ = 0;
  int max_job_size_ = 0;
  int max_vms_ = 0;
};

bool is_feasible(const AggregateConfig& config, const ClusterModel& cluster,
                 int server);

}  // namespace cloudsched

#endif  // CLOUDSCHED_CLUSTER_HPP_
