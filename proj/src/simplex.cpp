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

#include "cloudsched/simplex.hpp"

#include <stdexcept>

namespace cloudsched {

void LinearProgram::add_row(std::vector<Rational> row, RowSense s,
                            Rational b) {
  if (static_cast<int>(row.size()) != variables()) {
    throw std::invalid_argument("LP row length differs from variable count");
  }
  rows.push_back(std::move(row));
  sense.push_back(s);
  rhs.push_back(std::move(b));
}

namespace {

class Tableau {
 public:
  // Columns: structural, then one slack/surplus per inequality, then one
  // artificial per >= or = row. The last column is the right-hand side.
  explicit Tableau(const LinearProgram& lp) : n_(lp.variables()) {
    const int m = static_cast<int>(lp.rows.size());
    std::vector<RowSense> sense = lp.sense;
    std::vector<std::vector<Rational>> a = lp.rows;
    std::vector<Rational> b = lp.rhs;
    for (int i = 0; i < m; ++i) {
      if (sgn(b[i]) < 0) {
        for (auto& v : a[i]) v = -v;
        b[i] = -b[i];
        if (sense[i] == RowSense::kLessEqual) {
          sense[i] = RowSense::kGreaterEqual;
        } else if (sense[i] == RowSense::kGreaterEqual) {
          sense[i] = RowSense::kLessEqual;
        }
      }
    }
    int slacks = 0;
    int artificials = 0;
    for (auto s : sense) {
      if (s != RowSense::kEqual) ++slacks;
      if (s != RowSense::kLessEqual) ++artificials;
    }
    first_artificial_ = n_ + slacks;
    cols_ = first_artificial_ + artificials;
    rows_.assign(m, std::vector<Rational>(cols_ + 1));
    basis_.assign(m, -1);
    int slack = n_;
    int artificial = first_artificial_;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n_; ++j) rows_[i][j] = a[i][j];
      rows_[i][cols_] = b[i];
      if (sense[i] == RowSense::kLessEqual) {
        rows_[i][slack] = 1;
        basis_[i] = slack++;
      } else {
        if (sense[i] == RowSense::kGreaterEqual) rows_[i][slack++] = -1;
        rows_[i][artificial] = 1;
        basis_[i] = artificial++;
      }
    }
  }

  // Maximizes cost . x over the current basis. Columns at or beyond
  // `column_limit` never enter. Returns false when unbounded.
  bool optimize(const std::vector<Rational>& cost, int column_limit) {
    obj_.assign(cols_ + 1, Rational(0));
    for (int j = 0; j < cols_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (int j = 0; j <= cols_; ++j) obj_[j] -= cb * rows_[i][j];
    }
    while (true) {
      int enter = -1;
      for (int j = 0; j < column_limit; ++j) {
        if (sgn(obj_[j]) > 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][enter]) <= 0) continue;
        Rational ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = static_cast<int>(i);
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int e) {
    ++pivots_;
    const Rational p = rows_[r][e];
    for (auto& v : rows_[r]) v /= p;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (static_cast<int>(i) == r || sgn(rows_[i][e]) == 0) continue;
      const Rational f = rows_[i][e];
      for (int j = 0; j <= cols_; ++j) rows_[i][j] -= f * rows_[r][j];
    }
    if (!obj_.empty() && sgn(obj_[e]) != 0) {
      const Rational f = obj_[e];
      for (int j = 0; j <= cols_; ++j) obj_[j] -= f * rows_[r][j];
    }
    basis_[r] = e;
  }

  // After phase one: pivot zero-valued artificials out, dropping rows that
  // turn out to be redundant.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < first_artificial_) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < first_artificial_; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(static_cast<int>(i), col);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
      }
    }
  }

  int structural() const { return n_; }
  int columns() const { return cols_; }
  int first_artificial() const { return first_artificial_; }
  bool has_artificials() const { return first_artificial_ < cols_; }
  Rational value() const { return -obj_[cols_]; }
  int pivots() const { return pivots_; }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(n_, Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][cols_];
    }
    return x;
  }

 private:
  int n_;
  int cols_ = 0;
  int first_artificial_ = 0;
  int pivots_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> obj_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  if (lp.rows.size() != lp.sense.size() || lp.rows.size() != lp.rhs.size()) {
    throw std::invalid_argument("LP rows, senses and rhs differ in length");
  }
  Tableau tab(lp);
  LpSolution out;
  if (tab.has_artificials()) {
    std::vector<Rational> phase1(tab.columns(), Rational(0));
    for (int j = tab.first_artificial(); j < tab.columns(); ++j) phase1[j] = -1;
    tab.optimize(phase1, tab.columns());
    if (sgn(tab.value()) != 0) {
      out.status = LpStatus::kInfeasible;
      out.pivots = tab.pivots();
      return out;
    }
    tab.expel_artificials();
  }
  std::vector<Rational> cost(tab.columns(), Rational(0));
  for (int j = 0; j < tab.structural(); ++j) cost[j] = lp.objective[j];
  const bool bounded = tab.optimize(cost, tab.first_artificial());
  out.pivots = tab.pivots();
  if (!bounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.value = tab.value();
  out.x = tab.solution();
  return out;
}

}  // namespace cloudsched
