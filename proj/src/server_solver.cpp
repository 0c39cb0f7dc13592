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

#include "cloudsched/server_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cloudsched {

double ServerObjective::score(const AggregateConfig& w,
                              std::span<const int64_t> k) const {
  double base = 0.0;
  for (int m = 0; m < w.types(); ++m) base += weights[m] * w[m];
  base -= costs.V * server_cost(w, costs);
  switch (kind) {
    case Kind::kMigrationPenalty: {
      int64_t total = 0;
      for (int64_t x : k) total += x;
      return base - costs.U * static_cast<double>(total);
    }
    case Kind::kBias: {
      bool migrates = false;
      for (int64_t x : k) migrates = migrates || x != 0;
      const double factor = (bias_enabled && !migrates) ? 1.0 + bias : 1.0;
      return factor * base;
    }
    case Kind::kPowerPenalty: {
      double weighted = 0.0;
      for (std::size_t m = 0; m < k.size(); ++m) {
        weighted += static_cast<double>(k[m]) * weights[m];
      }
      return base - std::pow(weighted, 1.0 - costs.alpha);
    }
  }
  return base;
}

namespace {

constexpr int64_t kUnreachable = -1;

// best(j, w, d): the largest sum_{i >= j} q_i N_i over splits of w units
// across classes j..S-1 whose deficit sum_{i >= j} (c_i - N_i)^+ is d.
class RowTable {
 public:
  RowTable(std::span<const int64_t> q, std::span<const int64_t> c, int max_w)
      : q_(q),
        c_(c),
        classes_(static_cast<int>(q.size())),
        max_w_(max_w),
        max_d_(0) {
    for (int64_t x : c) max_d_ += static_cast<int>(x);
    table_.assign(static_cast<std::size_t>(classes_ + 1) * (max_w_ + 1) *
                      (max_d_ + 1),
                  kUnreachable);
    at(classes_, 0, 0) = 0;
    for (int j = classes_ - 1; j >= 0; --j) {
      for (int w = 0; w <= max_w_; ++w) {
        for (int n = 0; n <= w; ++n) {
          const int lost = static_cast<int>(positive_part(c_[j] - n));
          const int64_t gain = q_[j] * n;
          for (int d = lost; d <= max_d_; ++d) {
            const int64_t rest = at(j + 1, w - n, d - lost);
            if (rest == kUnreachable) continue;
            int64_t& cell = at(j, w, d);
            cell = std::max(cell, gain + rest);
          }
        }
      }
    }
  }

  int max_deficit() const { return max_d_; }
  int64_t best(int w, int d) const { return at(0, w, d); }

  // Lexicographically smallest split attaining best(w, d).
  void reconstruct(int w, int d, std::span<int64_t> out) const {
    int64_t target = at(0, w, d);
    for (int j = 0; j < classes_; ++j) {
      for (int n = 0; n <= w; ++n) {
        const int lost = static_cast<int>(positive_part(c_[j] - n));
        if (lost > d) continue;
        const int64_t rest = at(j + 1, w - n, d - lost);
        if (rest == kUnreachable || q_[j] * n + rest != target) continue;
        out[j] = n;
        w -= n;
        d -= lost;
        target = rest;
        break;
      }
    }
  }

 private:
  int64_t& at(int j, int w, int d) {
    return table_[(static_cast<std::size_t>(j) * (max_w_ + 1) + w) *
                      (max_d_ + 1) +
                  d];
  }
  int64_t at(int j, int w, int d) const {
    return table_[(static_cast<std::size_t>(j) * (max_w_ + 1) + w) *
                      (max_d_ + 1) +
                  d];
  }

  std::span<const int64_t> q_;
  std::span<const int64_t> c_;
  int classes_;
  int max_w_;
  int max_d_;
  std::vector<int64_t> table_;
};

// Whether k_m can change the score at all.
bool migrations_matter(const ServerObjective& obj, int m) {
  switch (obj.kind) {
    case ServerObjective::Kind::kMigrationPenalty:
      return obj.costs.U != 0.0;
    case ServerObjective::Kind::kBias:
      return obj.bias_enabled && obj.bias != 0.0;
    case ServerObjective::Kind::kPowerPenalty:
      return obj.weights[m] != 0.0;
  }
  return true;
}

bool lex_less(std::span<const int64_t> a, std::span<const int64_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ServerChoice solve_server(const ConfigSet& configs, const ClassMatrix& q,
                          const ClassMatrix& carry,
                          const ServerObjective& objective) {
  const int types = q.types();
  const int classes = q.classes();
  if (carry.types() != types || carry.classes() != classes ||
      static_cast<int>(objective.weights.size()) != types) {
    throw std::invalid_argument("solve_server: shape mismatch");
  }
  if (configs.empty()) throw std::invalid_argument("empty configuration set");

  std::vector<int> max_w(types, 0);
  for (const auto& w : configs) {
    for (int m = 0; m < types; ++m) max_w[m] = std::max(max_w[m], w[m]);
  }
  std::vector<RowTable> rows;
  rows.reserve(types);
  std::vector<int64_t> carried(types);
  std::vector<bool> matters(types);
  for (int m = 0; m < types; ++m) {
    rows.emplace_back(q.row(m), carry.row(m), max_w[m]);
    carried[m] = carry.row_total(m);
    matters[m] = migrations_matter(objective, m);
  }

  ServerChoice best;
  bool have_best = false;
  ClassMatrix candidate(types, classes);

  std::vector<std::vector<int>> options(types);
  std::vector<int64_t> k(types);
  std::vector<int64_t> k_probe(types);
  std::vector<std::size_t> pick(types);

  for (const auto& w : configs) {
    // Per-type candidate deficits for this aggregate.
    for (int m = 0; m < types; ++m) k[m] = positive_part(carried[m] - w[m]);
    for (int m = 0; m < types; ++m) {
      auto& opt = options[m];
      opt.clear();
      const RowTable& row = rows[m];
      if (!matters[m]) {
        // Score ignores k_m: take the deficit with the best tie value,
        // then the smaller row.
        int chosen = -1;
        std::vector<int64_t> chosen_row(classes), trial(classes);
        for (int d = 0; d <= row.max_deficit(); ++d) {
          const int64_t v = row.best(w[m], d);
          if (v == kUnreachable) continue;
          if (chosen >= 0 && v < row.best(w[m], chosen)) continue;
          std::fill(trial.begin(), trial.end(), 0);
          row.reconstruct(w[m], d, trial);
          if (chosen < 0 || v > row.best(w[m], chosen) ||
              lex_less(trial, chosen_row)) {
            chosen = d;
            chosen_row = trial;
          }
        }
        opt.push_back(chosen);
        continue;
      }
      // A type is pinned to its minimal deficit when one extra migration
      // already costs score; the penalties are monotone in k_m.
      bool pinned = false;
      if (objective.kind != ServerObjective::Kind::kBias &&
          k[m] < carried[m]) {
        k_probe = k;
        ++k_probe[m];
        pinned = objective.score(w, k_probe) < objective.score(w, k);
      }
      if (pinned || k[m] == carried[m]) {
        opt.push_back(static_cast<int>(k[m]));
        continue;
      }
      for (int d = static_cast<int>(k[m]); d <= row.max_deficit(); ++d) {
        if (row.best(w[m], d) != kUnreachable) opt.push_back(d);
      }
    }

    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      int64_t tie = 0;
      for (int m = 0; m < types; ++m) {
        k[m] = options[m][pick[m]];
        tie += rows[m].best(w[m], static_cast<int>(k[m]));
      }
      const double s = objective.score(w, k);
      const bool better_or_equal =
          !have_best || s > best.score ||
          (s == best.score && tie >= best.tie);
      if (better_or_equal) {
        candidate.fill(0);
        for (int m = 0; m < types; ++m) {
          auto flat = candidate.flat().subspan(
              static_cast<std::size_t>(m) * classes, classes);
          rows[m].reconstruct(w[m], static_cast<int>(k[m]), flat);
        }
        const bool strictly =
            !have_best || s > best.score || tie > best.tie;
        if (strictly || lex_less(candidate.flat(), best.config.flat())) {
          best.config = candidate;
          best.score = s;
          best.tie = tie;
          best.migrations = k;
          have_best = true;
        }
      }
      int m = types - 1;
      while (m >= 0 && ++pick[m] == options[m].size()) pick[m--] = 0;
      if (m < 0) break;
    }
  }
  return best;
}

namespace {

std::size_t binomial(std::size_t n, std::size_t r) {
  std::size_t out = 1;
  for (std::size_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

// Calls `visit` with every composition of `total` into `parts` slots.
template <typename Visit>
void for_each_composition(int total, std::span<int64_t> parts, Visit&& visit,
                          int index = 0) {
  const int last = static_cast<int>(parts.size()) - 1;
  if (index == last) {
    parts[index] = total;
    visit();
    return;
  }
  for (int n = 0; n <= total; ++n) {
    parts[index] = n;
    for_each_composition(total - n, parts, visit, index + 1);
  }
}

}  // namespace

std::size_t resolved_config_count(const ConfigSet& configs, int max_size) {
  std::size_t total = 0;
  for (const auto& w : configs) {
    std::size_t product = 1;
    for (int m = 0; m < w.types(); ++m) {
      product *= binomial(w[m] + max_size - 1, max_size - 1);
    }
    total += product;
  }
  return total;
}

BruteForceResult brute_force_argmax(const ConfigSet& configs, int max_size,
                                    const ClassMatrix& q,
                                    const ConfigScore& score,
                                    std::size_t limit) {
  if (resolved_config_count(configs, max_size) > limit) {
    throw std::length_error("brute-force search space exceeds the limit");
  }
  const int types = q.types();
  BruteForceResult best;
  bool have_best = false;
  ClassMatrix n(types, max_size);

  for (const auto& w : configs) {
    // Odometer over types; each level walks the compositions of W_m.
    std::function<void(int)> level = [&](int m) {
      if (m == types) {
        const double s = score(n);
        int64_t tie = 0;
        for (int t = 0; t < types; ++t) {
          for (int j = 0; j < max_size; ++j) tie += q(t, j) * n(t, j);
        }
        ++best.evaluated;
        if (!have_best || s > best.score ||
            (s == best.score &&
             (tie > best.tie ||
              (tie == best.tie && lex_less(n.flat(), best.config.flat()))))) {
          best.config = n;
          best.score = s;
          best.tie = tie;
          have_best = true;
        }
        return;
      }
      auto row = n.flat().subspan(static_cast<std::size_t>(m) * max_size,
                                  max_size);
      for_each_composition(w[m], row, [&] { level(m + 1); });
    };
    level(0);
  }
  return best;
}

}  // namespace cloudsched
