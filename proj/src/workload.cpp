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

#include <string>

namespace cloudsched {

uint64_t mix_seed(uint64_t base, uint64_t stream) {
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RateMatrix::RateMatrix(int types, int max_size)
    : types_(types),
      max_size_(max_size),
      exact_(static_cast<std::size_t>(types) * max_size, Rational(0)),
      approx_(static_cast<std::size_t>(types) * max_size, 0.0) {
  if (types < 1 || max_size < 1) {
    throw ConfigError("rate matrix needs M >= 1 and S >= 1");
  }
}

void RateMatrix::set(int m, int j, const Rational& rate) {
  if (sgn(rate) < 0) throw ConfigError("arrival rates must be >= 0");
  exact_[index(m, j)] = rate;
  approx_[index(m, j)] = to_double(rate);
}

bool RateMatrix::is_zero() const {
  for (const auto& r : exact_) {
    if (sgn(r) != 0) return false;
  }
  return true;
}

RateMatrix RateMatrix::scaled(const Rational& factor) const {
  RateMatrix out(types_, max_size_);
  for (int m = 0; m < types_; ++m) {
    for (int j = 0; j < max_size_; ++j) out.set(m, j, at(m, j) * factor);
  }
  return out;
}

RateMatrix build_reference_rates(int servers, const Rational& rho, int types,
                             int max_size) {
  if (servers < 1) throw ConfigError("need L >= 1");
  if (sgn(rho) < 0) throw ConfigError("rho must be >= 0");
  RateMatrix rates(types, max_size);
  for (int m = 0; m < types; ++m) {
    const Rational lambda = Rational(servers) * rho * (m + 1) / 165;
    for (int j = 0; j < max_size; ++j) rates.set(m, j, lambda);
  }
  return rates;
}

std::vector<Rational> workload_rate(const RateMatrix& rates) {
  std::vector<Rational> out(rates.types(), Rational(0));
  for (int m = 0; m < rates.types(); ++m) {
    for (int j = 0; j < rates.max_size(); ++j) {
      out[m] += (j + 1) * rates.at(m, j);
    }
  }
  return out;
}

ArrivalSampler::ArrivalSampler(const RateMatrix& rates, int a_max)
    : types_(rates.types()), max_size_(rates.max_size()), a_max_(a_max) {
  if (a_max < 1) throw ConfigError("A_max must be >= 1");
  for (int m = 0; m < types_; ++m) {
    for (int j = 0; j < max_size_; ++j) {
      const Rational& rate = rates.at(m, j);
      if (rate > a_max) {
        throw ConfigError("arrival rate of type (" + std::to_string(m + 1) +
                          "," + std::to_string(j + 1) + ") exceeds A_max");
      }
      if (sgn(rate) == 0) continue;
      const double p = to_double(Rational(rate / a_max));
      entries_.push_back({m, j, std::binomial_distribution<int64_t>(a_max, p)});
    }
  }
}

void ArrivalSampler::sample(Rng& rng, ArrivalBatch& out) {
  if (out.types() != types_ || out.classes() != max_size_) {
    out = ArrivalBatch(types_, max_size_);
  } else {
    out.fill(0);
  }
  for (auto& e : entries_) out(e.m, e.j) = e.dist(rng);
}

ArrivalBatch sample_arrivals(const RateMatrix& rates, int a_max, Rng& rng) {
  ArrivalSampler sampler(rates, a_max);
  ArrivalBatch out(rates.types(), rates.max_size());
  sampler.sample(rng, out);
  return out;
}

}  // namespace cloudsched
