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

#ifndef CLOUDSCHED_TYPES_HPP_
#define CLOUDSCHED_TYPES_HPP_

#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cloudsched {

// Raised when a precondition that the queue dynamics guarantee is violated.
// Seeing one of these means the simulation state is corrupt.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised for invalid user-supplied parameters and config files.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an arrival vector lies outside the capacity region.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int64_t positive_part(int64_t x) { return x > 0 ? x : 0; }

// Dense types x classes matrix of non-negative counts. A class is either a
// residual job size (column j holds size j + 1) or a service age (column j
// holds age j), depending on the queueing model.
class ClassMatrix {
 public:
  ClassMatrix() = default;
  ClassMatrix(int types, int classes)
      : types_(types),
        classes_(classes),
        data_(static_cast<std::size_t>(types) * classes, 0) {}

  int types() const { return types_; }
  int classes() const { return classes_; }

  int64_t& operator()(int m, int j) { return data_[index(m, j)]; }
  int64_t operator()(int m, int j) const { return data_[index(m, j)]; }

  // Out-of-range columns read as zero. Handy for the s + 1 / a - 1 terms.
  int64_t at_or_zero(int m, int j) const {
    return (j < 0 || j >= classes_) ? 0 : data_[index(m, j)];
  }

  std::span<const int64_t> row(int m) const {
    return {data_.data() + index(m, 0), static_cast<std::size_t>(classes_)};
  }
  std::span<const int64_t> flat() const { return data_; }
  std::span<int64_t> flat() { return data_; }

  int64_t row_total(int m) const {
    auto r = row(m);
    return std::accumulate(r.begin(), r.end(), int64_t{0});
  }
  int64_t total() const {
    return std::accumulate(data_.begin(), data_.end(), int64_t{0});
  }
  bool is_zero() const {
    for (int64_t v : data_) {
      if (v != 0) return false;
    }
    return true;
  }
  void fill(int64_t v) { std::fill(data_.begin(), data_.end(), v); }

  ClassMatrix& operator+=(const ClassMatrix& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  friend bool operator==(const ClassMatrix&, const ClassMatrix&) = default;
  friend auto operator<=>(const ClassMatrix& a, const ClassMatrix& b) {
    return a.data_ <=> b.data_;
  }

 private:
  std::size_t index(int m, int j) const {
    return static_cast<std::size_t>(m) * classes_ + j;
  }

  int types_ = 0;
  int classes_ = 0;
  std::vector<int64_t> data_;
};

// Sum of per-server matrices.
inline ClassMatrix sum_over_servers(std::span<const ClassMatrix> per_server,
                                    int types, int classes) {
  ClassMatrix total(types, classes);
  for (const auto& n : per_server) total += n;
  return total;
}

}  // namespace cloudsched

#endif  // CLOUDSCHED_TYPES_HPP_
