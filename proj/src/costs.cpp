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

#include "cloudsched/costs.hpp"

#include <cmath>

namespace cloudsched {

CostModel parse_cost_model(const std::string& name) {
  if (name == "affine") return CostModel::kAffine;
  if (name == "binary") return CostModel::kBinary;
  throw ConfigError("unknown cost_model '" + name +
                    "' (expected affine or binary)");
}

std::string to_string(CostModel model) {
  return model == CostModel::kAffine ? "affine" : "binary";
}

void CostParams::validate(int types) const {
  auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0; };
  if (!finite_nonneg(c0)) throw ConfigError("c0 must be >= 0");
  if (model == CostModel::kAffine && static_cast<int>(c.size()) != types) {
    throw ConfigError("c must list one dynamic cost per VM type (" +
                      std::to_string(types) + ")");
  }
  for (double x : c) {
    if (!finite_nonneg(x)) throw ConfigError("dynamic costs must be >= 0");
  }
  if (!finite_nonneg(U)) throw ConfigError("U must be >= 0");
  if (!finite_nonneg(V)) throw ConfigError("V must be >= 0");
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must be in (0,1)");
}

double server_cost(const AggregateConfig& aggregate, const CostParams& p) {
  if (aggregate.is_zero()) return 0.0;
  double cost = p.c0;
  if (p.model == CostModel::kAffine) {
    for (int m = 0; m < aggregate.types(); ++m) cost += p.c[m] * aggregate[m];
  }
  return cost;
}

double server_cost(const ClassMatrix& config, const CostParams& p) {
  if (config.is_zero()) return 0.0;
  double cost = p.c0;
  if (p.model == CostModel::kAffine) {
    for (int m = 0; m < config.types(); ++m) {
      cost += p.c[m] * static_cast<double>(config.row_total(m));
    }
  }
  return cost;
}

int64_t migration_cost(const ClassMatrix& n_prev, const ClassMatrix& next) {
  int64_t cost = 0;
  for (int m = 0; m < n_prev.types(); ++m) {
    for (int j = 1; j < n_prev.classes(); ++j) {
      cost += positive_part(n_prev(m, j) - next(m, j - 1));
    }
  }
  return cost;
}

int64_t migration_cost_age(const ClassMatrix& n_prev,
                           const ClassMatrix& z_prev,
                           const ClassMatrix& next) {
  int64_t cost = 0;
  for (int m = 0; m < n_prev.types(); ++m) {
    for (int a = 0; a + 1 < n_prev.classes(); ++a) {
      cost += positive_part(n_prev(m, a) - z_prev(m, a) - next(m, a + 1));
    }
  }
  return cost;
}

double penalty(std::span<const double> server_costs,
               std::span<const double> migration_costs, const CostParams& p) {
  double c1 = 0.0;
  for (double x : server_costs) c1 += x;
  double c2 = 0.0;
  for (double x : migration_costs) c2 += x;
  return p.V * c1 + p.U * c2;
}

}  // namespace cloudsched
