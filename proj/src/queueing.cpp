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
#include <ostream>
#include <string>

namespace cloudsched {

namespace {

std::string cell(int m, int j) {
  return "(" + std::to_string(m + 1) + "," + std::to_string(j + 1) + ")";
}

void check_shapes(const ClassMatrix& q, std::span<const ServiceConfig> a,
                  std::span<const ServiceConfig> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("per-server inputs differ in server count");
  }
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (a[l].types() != q.types() || a[l].classes() != q.classes() ||
        b[l].types() != q.types() || b[l].classes() != q.classes()) {
      throw std::invalid_argument("config shape does not match the queues");
    }
  }
}

// Shared body of Steps 2-4. `carry[l]` is what server l could keep running;
// `waiting_only` removes every carried job from the pool instead of only
// the kept ones.
std::vector<ServiceConfig> realize_with(const ClassMatrix& q,
                                        std::span<const ClassMatrix> carry,
                                        std::span<const ServiceConfig> prescribed,
                                        bool waiting_only) {
  const int types = q.types();
  const int classes = q.classes();
  std::vector<ServiceConfig> actual(prescribed.size(),
                                    ServiceConfig(types, classes));
  ClassMatrix pool = q;
  for (std::size_t l = 0; l < prescribed.size(); ++l) {
    for (int m = 0; m < types; ++m) {
      for (int j = 0; j < classes; ++j) {
        const int64_t kept = std::min(prescribed[l](m, j), carry[l](m, j));
        actual[l](m, j) = kept;
        pool(m, j) -= waiting_only ? carry[l](m, j) : kept;
      }
    }
  }
  for (int m = 0; m < types; ++m) {
    for (int j = 0; j < classes; ++j) {
      if (pool(m, j) < 0) {
        throw ConsistencyError("servers carry more type-" + cell(m, j) +
                               " jobs than the queue holds");
      }
    }
  }
  for (std::size_t l = 0; l < prescribed.size(); ++l) {
    for (int m = 0; m < types; ++m) {
      for (int j = 0; j < classes; ++j) {
        const int64_t want = prescribed[l](m, j) - actual[l](m, j);
        const int64_t take = std::min(pool(m, j), want);
        actual[l](m, j) += take;
        pool(m, j) -= take;
      }
    }
  }
  return actual;
}

}  // namespace

ClassMatrix carry_known(const ServiceConfig& n_prev) {
  ClassMatrix carry(n_prev.types(), n_prev.classes());
  for (int m = 0; m < n_prev.types(); ++m) {
    for (int j = 0; j + 1 < n_prev.classes(); ++j) {
      carry(m, j) = n_prev(m, j + 1);
    }
  }
  return carry;
}

ClassMatrix carry_age(const ServiceConfig& n_prev, const Departures& z_prev) {
  ClassMatrix carry(n_prev.types(), n_prev.classes());
  for (int m = 0; m < n_prev.types(); ++m) {
    for (int a = 1; a < n_prev.classes(); ++a) {
      const int64_t c = n_prev(m, a - 1) - z_prev(m, a - 1);
      if (c < 0) {
        throw ConsistencyError("more departures than served jobs in class " +
                               cell(m, a - 1));
      }
      carry(m, a) = c;
    }
  }
  return carry;
}

std::vector<ServiceConfig> realize_known(
    const SizeQueues& q, std::span<const ServiceConfig> n_prev,
    std::span<const ServiceConfig> prescribed) {
  check_shapes(q, n_prev, prescribed);
  std::vector<ClassMatrix> carry;
  carry.reserve(n_prev.size());
  for (const auto& n : n_prev) carry.push_back(carry_known(n));
  return realize_with(q, carry, prescribed, false);
}

std::vector<ServiceConfig> realize_offline(
    const SizeQueues& q, std::span<const ServiceConfig> n_prev,
    std::span<const ServiceConfig> prescribed) {
  check_shapes(q, n_prev, prescribed);
  std::vector<ClassMatrix> carry;
  carry.reserve(n_prev.size());
  for (const auto& n : n_prev) carry.push_back(carry_known(n));
  return realize_with(q, carry, prescribed, true);
}

std::vector<ServiceConfig> realize_unknown(
    const ClassMatrix& visible, std::span<const ServiceConfig> n_prev,
    std::span<const Departures> z_prev,
    std::span<const ServiceConfig> prescribed) {
  check_shapes(visible, n_prev, prescribed);
  check_shapes(visible, n_prev, z_prev);
  std::vector<ClassMatrix> carry;
  carry.reserve(n_prev.size());
  for (std::size_t l = 0; l < n_prev.size(); ++l) {
    carry.push_back(carry_age(n_prev[l], z_prev[l]));
  }
  return realize_with(visible, carry, prescribed, false);
}

SizeQueues advance_known(const SizeQueues& q, const ClassMatrix& prescribed_sum,
                         const ArrivalBatch& arrivals) {
  SizeQueues next(q.types(), q.classes());
  for (int m = 0; m < q.types(); ++m) {
    for (int j = 0; j < q.classes(); ++j) {
      int64_t v = positive_part(q(m, j) - prescribed_sum(m, j)) +
                  arrivals(m, j);
      if (j + 1 < q.classes()) {
        v += std::min(prescribed_sum(m, j + 1), q(m, j + 1));
      }
      next(m, j) = v;
    }
  }
  return next;
}

AgeQueues::AgeQueues(int types, int max_size)
    : types_(types),
      max_size_(max_size),
      comp_(static_cast<std::size_t>(types) * max_size * max_size, 0) {
  if (types < 1 || max_size < 1) {
    throw ConfigError("age queues need M >= 1 and S >= 1");
  }
}

void AgeQueues::set_composition(int m, int a, int j, int64_t count) {
  if (j < a && count != 0) {
    throw std::invalid_argument("a job of age a must have size > a");
  }
  if (count < 0) throw std::invalid_argument("negative job count");
  comp_[index(m, a, j)] = count;
}

ClassMatrix AgeQueues::visible() const {
  ClassMatrix out(types_, max_size_);
  for (int m = 0; m < types_; ++m) {
    for (int a = 0; a < max_size_; ++a) {
      int64_t n = 0;
      for (int j = a; j < max_size_; ++j) n += comp_[index(m, a, j)];
      out(m, a) = n;
    }
  }
  return out;
}

int64_t AgeQueues::remaining_workload() const {
  int64_t work = 0;
  for (int m = 0; m < types_; ++m) {
    for (int a = 0; a < max_size_; ++a) {
      for (int j = a; j < max_size_; ++j) {
        work += comp_[index(m, a, j)] * (j + 1 - a);
      }
    }
  }
  return work;
}

int64_t AgeQueues::total_jobs() const {
  int64_t n = 0;
  for (int64_t c : comp_) n += c;
  return n;
}

void AgeQueues::add_arrivals(const ArrivalBatch& arrivals) {
  for (int m = 0; m < types_; ++m) {
    for (int j = 0; j < max_size_; ++j) comp_[index(m, 0, j)] += arrivals(m, j);
  }
}

std::vector<Departures> sample_departures(std::span<const ServiceConfig> served,
                                          AgeQueues& queues, Rng& rng) {
  const int types = queues.types_;
  const int size = queues.max_size_;
  std::vector<Departures> departures(served.size(), Departures(types, size));
  std::vector<int64_t> bucket(size);
  std::vector<int64_t> taken(size);
  for (int m = 0; m < types; ++m) {
    // Descending age, so jobs promoted to a + 1 are not served twice.
    for (int a = size - 1; a >= 0; --a) {
      int64_t demand = 0;
      for (const auto& n : served) demand += n(m, a);
      if (demand == 0) continue;
      int64_t available = 0;
      for (int j = a; j < size; ++j) {
        bucket[j] = queues.comp_[queues.index(m, a, j)];
        available += bucket[j];
      }
      if (demand > available) {
        throw ConsistencyError("class " + cell(m, a) + " has " +
                               std::to_string(available) + " jobs, asked " +
                               std::to_string(demand));
      }
      std::fill(taken.begin(), taken.end(), 0);
      for (std::size_t l = 0; l < served.size(); ++l) {
        for (int64_t k = 0; k < served[l](m, a); ++k) {
          std::uniform_int_distribution<int64_t> pick(0, available - 1);
          int64_t r = pick(rng);
          int j = a;
          while (r >= bucket[j]) r -= bucket[j++];
          --bucket[j];
          --available;
          ++taken[j];
          if (j == a) ++departures[l](m, a);
        }
      }
      for (int j = a; j < size; ++j) {
        if (taken[j] == 0) continue;
        queues.comp_[queues.index(m, a, j)] -= taken[j];
        if (j > a) queues.comp_[queues.index(m, a + 1, j)] += taken[j];
      }
    }
  }
  return departures;
}

ClassMatrix advance_unknown(const ClassMatrix& visible,
                            const ClassMatrix& prescribed_sum,
                            const ClassMatrix& departures_sum,
                            const ArrivalBatch& arrivals) {
  ClassMatrix next(visible.types(), visible.classes());
  for (int m = 0; m < visible.types(); ++m) {
    next(m, 0) = positive_part(visible(m, 0) - prescribed_sum(m, 0)) +
                 arrivals.row_total(m);
    for (int a = 1; a < visible.classes(); ++a) {
      const int64_t v =
          positive_part(visible(m, a) - prescribed_sum(m, a)) +
          std::min(prescribed_sum(m, a - 1), visible(m, a - 1)) -
          departures_sum(m, a - 1);
      if (v < 0) {
        throw ConsistencyError("negative age queue " + cell(m, a));
      }
      next(m, a) = v;
    }
  }
  return next;
}

SizeQueues advance_offline(const SizeQueues& q,
                           std::span<const ServiceConfig> actual,
                           std::span<const ServiceConfig> actual_prev,
                           const ArrivalBatch& arrivals) {
  check_shapes(q, actual, actual_prev);
  const int types = q.types();
  const int classes = q.classes();
  ClassMatrix served(types, classes);
  ClassMatrix migrated(types, classes);  // current size j + 1, preempted now
  for (std::size_t l = 0; l < actual.size(); ++l) {
    for (int m = 0; m < types; ++m) {
      for (int j = 0; j < classes; ++j) {
        served(m, j) += actual[l](m, j);
        migrated(m, j) +=
            positive_part(actual_prev[l].at_or_zero(m, j + 1) - actual[l](m, j));
      }
    }
  }
  SizeQueues next(types, classes);
  for (int m = 0; m < types; ++m) {
    for (int j = 0; j < classes; ++j) {
      int64_t v = q(m, j) - served(m, j) + arrivals(m, j) +
                  served.at_or_zero(m, j + 1) - migrated(m, j);
      if (j > 0) v += migrated(m, j - 1);
      if (v < 0) {
        throw ConsistencyError("negative queue " + cell(m, j) +
                               " in offline evolution");
      }
      next(m, j) = v;
    }
  }
  return next;
}

std::vector<int64_t> workload_backlog(const SizeQueues& q) {
  std::vector<int64_t> out(q.types(), 0);
  for (int m = 0; m < q.types(); ++m) {
    for (int j = 0; j < q.classes(); ++j) out[m] += (j + 1) * q(m, j);
  }
  return out;
}

void write_dump(std::ostream& out, const ClassMatrix& q, bool age_indexed) {
  for (int m = 0; m < q.types(); ++m) {
    for (int j = 0; j < q.classes(); ++j) {
      if (q(m, j) == 0) continue;
      out << (m + 1) << ' ' << (age_indexed ? j : j + 1) << ' ' << q(m, j)
          << '\n';
    }
  }
}

}  // namespace cloudsched
