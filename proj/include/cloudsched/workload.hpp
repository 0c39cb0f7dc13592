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

#ifndef CLOUDSCHED_WORKLOAD_HPP_
#define CLOUDSCHED_WORKLOAD_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "cloudsched/rational.hpp"
#include "cloudsched/types.hpp"

namespace cloudsched {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds.
uint64_t mix_seed(uint64_t base, uint64_t stream);

// Expected arrivals per slot, lambda_{m,s}, for m in [0, M) and sizes
// s = j + 1. Stored exactly; the simulator samples from the double view.
class RateMatrix {
 public:
  RateMatrix() = default;
  RateMatrix(int types, int max_size);

  int types() const { return types_; }
  int max_size() const { return max_size_; }

  const Rational& at(int m, int j) const { return exact_[index(m, j)]; }
  double value(int m, int j) const { return approx_[index(m, j)]; }
  void set(int m, int j, const Rational& rate);

  bool is_zero() const;
  RateMatrix scaled(const Rational& factor) const;

 private:
  std::size_t index(int m, int j) const {
    return static_cast<std::size_t>(m) * max_size_ + j;
  }

  int types_ = 0;
  int max_size_ = 0;
  std::vector<Rational> exact_;
  std::vector<double> approx_;
};

using ArrivalBatch = ClassMatrix;

// lambda_{m,s} = L * rho * m / 165 for every size s (types numbered from 1).
RateMatrix build_reference_rates(int servers, const Rational& rho, int types,
                             int max_size);

// Per-type workload rate, sum_s s * lambda_{m,s}.
std::vector<Rational> workload_rate(const RateMatrix& rates);

// Draws A_{m,s} ~ Binomial(A_max, lambda_{m,s} / A_max) independently per
// entry. Holds the distributions so repeated draws stay cheap.
class ArrivalSampler {
 public:
  ArrivalSampler(const RateMatrix& rates, int a_max);

  void sample(Rng& rng, ArrivalBatch& out);
  int a_max() const { return a_max_; }

 private:
  struct Entry {
    int m;
    int j;
    std::binomial_distribution<int64_t> dist;
  };
  int types_;
  int max_size_;
  int a_max_;
  std::vector<Entry> entries_;  // nonzero rates only
};

ArrivalBatch sample_arrivals(const RateMatrix& rates, int a_max, Rng& rng);

}  // namespace cloudsched

#endif  // CLOUDSCHED_WORKLOAD_HPP_
