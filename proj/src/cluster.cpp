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
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "cloudsched/types.hpp"

namespace cloudsched {

ResourceVector::ResourceVector(std::vector<Rational> amounts)
    : amounts_(std::move(amounts)) {
  if (amounts_.empty()) throw ConfigError("resource vector must be non-empty");
  for (const auto& a : amounts_) {
    if (sgn(a) < 0) throw ConfigError("resource amounts must be >= 0");
  }
}

AggregateConfig::AggregateConfig(std::vector<int> counts)
    : counts_(std::move(counts)) {
  for (int c : counts_) {
    if (c < 0) throw ConfigError("VM counts must be >= 0");
  }
}

int AggregateConfig::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0);
}

bool AggregateConfig::dominated_by(const AggregateConfig& other) const {
  if (other.types() != types()) return false;
  for (int m = 0; m < types(); ++m) {
    if (counts_[m] > other.counts_[m]) return false;
  }
  return true;
}

namespace {

void enumerate_resources(const ResourceVector& capacity,
                         const std::vector<ResourceVector>& demands,
                         std::vector<Rational>& used, std::vector<int>& eta,
                         std::size_t m, ConfigSet& out) {
  if (m == demands.size()) {
    out.emplace_back(eta);
    return;
  }
  for (int count = 0;; ++count) {
    bool fits = true;
    for (std::size_t k = 0; k < capacity.size(); ++k) {
      if (used[k] + count * demands[m][k] > capacity[k]) {
        fits = false;
        break;
      }
    }
    if (!fits) break;
    for (std::size_t k = 0; k < capacity.size(); ++k) {
      used[k] += count * demands[m][k];
    }
    eta[m] = count;
    enumerate_resources(capacity, demands, used, eta, m + 1, out);
    for (std::size_t k = 0; k < capacity.size(); ++k) {
      used[k] -= count * demands[m][k];
    }
  }
  eta[m] = 0;
}

}  // namespace

ConfigSet feasible_from_resources(const ResourceVector& capacity,
                                  const std::vector<ResourceVector>& demands) {
  if (capacity.size() == 0) throw ConfigError("need at least one resource");
  if (demands.empty()) throw ConfigError("need at least one VM type");
  for (std::size_t m = 0; m < demands.size(); ++m) {
    if (demands[m].size() != capacity.size()) {
      throw ConfigError("VM type " + std::to_string(m + 1) +
                        " demand has the wrong number of resources");
    }
    bool positive = false;
    for (std::size_t k = 0; k < capacity.size(); ++k) {
      if (sgn(demands[m][k]) > 0) positive = true;
    }
    if (!positive) {
      throw ConfigError("VM type " + std::to_string(m + 1) +
                        " has zero demand on every resource: unbounded "
                        "configuration set");
    }
  }
  std::vector<Rational> used(capacity.size(), Rational(0));
  std::vector<int> eta(demands.size(), 0);
  ConfigSet out;
  enumerate_resources(capacity, demands, used, eta, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

ConfigSet feasible_from_maximal(const ConfigSet& maximal) {
  if (maximal.empty()) throw ConfigError("need at least one maximal config");
  const int types = maximal.front().types();
  std::set<AggregateConfig> closure;
  for (const auto& top : maximal) {
    if (top.types() != types) {
      throw ConfigError("maximal configs disagree on the number of VM types");
    }
    std::vector<int> cur(types, 0);
    // Odometer over the box [0, top].
    while (true) {
      closure.emplace(cur);
      int m = types - 1;
      while (m >= 0 && cur[m] == top[m]) cur[m--] = 0;
      if (m < 0) break;
      ++cur[m];
    }
  }
  return {closure.begin(), closure.end()};
}

ClusterModel::ClusterModel(std::vector<ConfigSet> per_server,
                           int max_job_size) {
  if (per_server.empty()) throw ConfigError("need at least one server");
  max_job_size_ = max_job_size;
  for (auto& set : per_server) {
    auto it = std::find(sets_.begin(), sets_.end(), set);
    if (it == sets_.end()) {
      sets_.push_back(std::move(set));
      server_set_.push_back(sets_.size() - 1);
    } else {
      server_set_.push_back(static_cast<std::size_t>(it - sets_.begin()));
    }
  }
  finish();
}

ClusterModel ClusterModel::identical(int servers, ConfigSet feasible,
                                     int max_job_size) {
  if (servers < 1) throw ConfigError("need at least one server");
  ClusterModel c;
  c.max_job_size_ = max_job_size;
  c.sets_.push_back(std::move(feasible));
  c.server_set_.assign(static_cast<std::size_t>(servers), 0);
  c.finish();
  return c;
}

void ClusterModel::finish() {
  if (max_job_size_ < 1) throw ConfigError("max job size must be >= 1");
  vm_types_ = -1;
  for (auto& set : sets_) {
    if (set.empty()) throw ConfigError("feasible set must be non-empty");
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    const int types = set.front().types();
    if (types < 1) throw ConfigError("need at least one VM type");
    if (vm_types_ == -1) vm_types_ = types;
    if (types != vm_types_) {
      throw ConfigError("servers disagree on the number of VM types");
    }
    if (!set.front().is_zero()) {
      throw ConfigError("feasible set must contain the all-zero config");
    }
    for (const auto& w : set) {
      if (w.types() != vm_types_) {
        throw ConfigError("config has the wrong number of VM types");
      }
      max_vms_ = std::max(max_vms_, w.total());
    }
  }
  // Downward closure is a model invariant; reject sets that break it.
  for (const auto& set : sets_) {
    for (const auto& w : set) {
      for (int m = 0; m < vm_types_; ++m) {
        if (w[m] == 0) continue;
        auto lower = w.counts();
        --lower[m];
        if (!std::binary_search(set.begin(), set.end(),
                                AggregateConfig(lower))) {
          throw ConfigError("feasible set is not downward closed");
        }
      }
    }
  }
  max_count_.assign(sets_.size(), std::vector<int>(vm_types_, 0));
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    for (const auto& w : sets_[i]) {
      for (int m = 0; m < vm_types_; ++m) {
        max_count_[i][m] = std::max(max_count_[i][m], w[m]);
      }
    }
  }
}

const ConfigSet& ClusterModel::feasible(int server) const {
  if (server < 0 || server >= servers()) {
    throw std::out_of_range("server index " + std::to_string(server));
  }
  return sets_[server_set_[server]];
}

int ClusterModel::max_count(int server, int m) const {
  feasible(server);
  return max_count_[server_set_[server]][m];
}

bool is_feasible(const AggregateConfig& config, const ClusterModel& cluster,
                 int server) {
  const auto& set = cluster.feasible(server);
  if (config.types() != cluster.vm_types()) {
    throw std::invalid_argument("config has the wrong number of VM types");
  }
  return std::binary_search(set.begin(), set.end(), config);
}

}  // namespace cloudsched
