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

// Experiment files (JSON), command-line overrides, CSV output and the
// built-in figure sweeps.

#ifndef CLOUDSCHED_EXPERIMENT_HPP_
#define CLOUDSCHED_EXPERIMENT_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloudsched/engine.hpp"

namespace cloudsched {

struct SweepSpec {
  SweepAxis axis = SweepAxis::kRho;
  std::vector<double> values;
  int replications = 5;
};

struct Experiment {
  RunConfig run;
  std::optional<SweepSpec> sweep;
  std::string output;       // empty means stdout
  nlohmann::json effective; // the document with every default filled in
};

// Reads and parses a JSON file. Throws ConfigError naming the file and,
// for syntax errors, the line.
nlohmann::json load_json_file(const std::string& path);

// Applies "KEY=VALUE". VALUE is parsed as JSON when it parses, otherwise
// taken as a string. KEY may be dotted ("sweep.replications").
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Validates `doc` and builds the experiment. `seed_fallback` is used when
// the document has no seed. Throws ConfigError naming the offending field.
Experiment parse_experiment(const nlohmann::json& doc,
                            std::optional<uint64_t> seed_fallback = {});

// A config document that parse_experiment maps back to `config`. The
// cluster is written as its full feasible set; rho as an exact fraction.
nlohmann::json describe(const RunConfig& config);

// Exact CSV schema shared by every writer.
const std::string& csv_header();
std::string csv_row(const RunMetrics& m);
void write_csv(std::ostream& out, const std::vector<RunMetrics>& rows,
               bool header = true);

// The three-type cluster used throughout the experiments: ten servers,
// maximal configs (0,0,2), (0,1,1), (1,1,0), jobs up to 10 slots.
ClusterModel reference_cluster();

struct FigurePanel {
  std::string name;  // CSV file stem, e.g. "fig6_alg1"
  RunConfig base;
  SweepAxis axis = SweepAxis::kRho;
  std::vector<double> values;
  int replications = 5;
};

const std::vector<std::string>& figure_ids();

// Sweeps behind figure `id` at the given horizon. Throws ConfigError for
// an unknown id.
std::vector<FigurePanel> figure_panels(const std::string& id, int64_t horizon,
                                       uint64_t seed, int replications);

}  // namespace cloudsched

#endif  // CLOUDSCHED_EXPERIMENT_HPP_
