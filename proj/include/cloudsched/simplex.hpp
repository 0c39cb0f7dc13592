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

// Dense two-phase simplex over exact rationals. Bland's rule throughout, so
// it terminates on degenerate problems. Meant for tens of variables.

#ifndef CLOUDSCHED_SIMPLEX_HPP_
#define CLOUDSCHED_SIMPLEX_HPP_

#include <vector>

#include "cloudsched/rational.hpp"

namespace cloudsched {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// maximize objective . x  subject to  rows[i] . x (sense[i]) rhs[i], x >= 0.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> rows;
  std::vector<RowSense> sense;
  std::vector<Rational> rhs;

  int variables() const { return static_cast<int>(objective.size()); }
  void add_row(std::vector<Rational> row, RowSense s, Rational b);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;
  std::vector<Rational> x;
  int pivots = 0;
};

LpSolution solve_lp(const LinearProgram& lp);

}  // namespace cloudsched

#endif  // CLOUDSCHED_SIMPLEX_HPP_
