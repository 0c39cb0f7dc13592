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

// cloudsched: run, sweep, opt and figures subcommands.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cloudsched/engine.hpp"
#include "cloudsched/experiment.hpp"
#include "cloudsched/optimum.hpp"

namespace {

using cloudsched::ConfigError;
using cloudsched::Experiment;
using cloudsched::RunMetrics;
using nlohmann::json;

struct CommonFlags {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  std::optional<uint64_t> seed;
  int jobs = 0;
  bool quiet = false;
};

std::optional<uint64_t> env_seed() {
  const char* text = std::getenv("CLOUDSCHED_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != std::string(text).size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("CLOUDSCHED_SEED is not an unsigned integer: '" +
                      std::string(text) + "'");
  }
}

Experiment load(const CommonFlags& flags) {
  json doc = cloudsched::load_json_file(flags.config);
  for (const auto& o : flags.overrides) cloudsched::apply_override(doc, o);
  if (flags.seed) doc["seed"] = *flags.seed;
  return cloudsched::parse_experiment(doc, env_seed());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

// CSV to `out_path` (or stdout) plus the effective config next to it.
void emit(const std::vector<RunMetrics>& rows, const json& effective,
          const std::string& out_path) {
  if (out_path.empty()) {
    cloudsched::write_csv(std::cout, rows);
    std::cerr << "# effective config: " << effective.dump() << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  cloudsched::write_csv(out, rows);
  write_text(out_path + ".config.json", effective.dump(2) + "\n");
}

void summarize(const std::vector<RunMetrics>& rows) {
  for (const auto& m : rows) {
    std::cerr << m.scheduler << " rho=" << m.rho << " V=" << m.V
              << " U=" << m.U << " seed=" << m.seed
              << ": queue=" << m.mean_queue_len
              << " active=" << m.mean_active_servers
              << " cost=" << m.mean_server_cost
              << " migrations=" << m.mean_migrations
              << " invariant_violations=" << m.invariants.total();
    if (m.interval_check.any) {
      std::cerr << " interval_violations=" << m.interval_check.violations;
    }
    std::cerr << " (" << m.wall_seconds << " s)\n";
  }
}

// Trace invariants that fail without throwing still fail the command.
int consistency_status(const std::vector<RunMetrics>& rows) {
  for (const auto& m : rows) {
    if (m.invariants.total() > 0) {
      std::cerr << "error: " << m.invariants.total()
                << " invariant violations (" << m.scheduler
                << ", seed " << m.seed << ")\n";
      return 2;
    }
  }
  return 0;
}

int cmd_run(const CommonFlags& flags) {
  Experiment ex = load(flags);
  std::vector<RunMetrics> rows;
  if (ex.sweep) {
    rows = cloudsched::sweep(ex.run, ex.sweep->axis, ex.sweep->values,
                             ex.sweep->replications, flags.jobs);
  } else {
    rows.push_back(cloudsched::run(ex.run));
  }
  emit(rows, ex.effective, flags.out.empty() ? ex.output : flags.out);
  if (!flags.quiet) summarize(rows);
  return consistency_status(rows);
}

int cmd_sweep(CommonFlags flags, const std::string& axis,
              const std::vector<double>& values, int reps) {
  if (!axis.empty()) flags.overrides.push_back("sweep.axis=\"" + axis + "\"");
  if (!values.empty()) {
    flags.overrides.push_back("sweep.values=" + json(values).dump());
  }
  if (reps > 0) {
    flags.overrides.push_back("sweep.replications=" + std::to_string(reps));
  }
  Experiment ex = load(flags);
  if (!ex.sweep) {
    throw ConfigError("field 'sweep': missing (give it in the file or use "
                      "--axis/--values)");
  }
  std::vector<RunMetrics> rows =
      cloudsched::sweep(ex.run, ex.sweep->axis, ex.sweep->values,
                        ex.sweep->replications, flags.jobs);
  emit(rows, ex.effective, flags.out.empty() ? ex.output : flags.out);
  if (!flags.quiet) summarize(rows);
  return consistency_status(rows);
}

int cmd_opt(const CommonFlags& flags) {
  Experiment ex = load(flags);
  const cloudsched::RunConfig& rc = ex.run;
  cloudsched::RunConfig unit = rc;
  unit.rho = cloudsched::Rational(1);
  std::cout << "rho = " << rc.rho.get_str() << '\n';
  try {
    const cloudsched::Rational star = cloudsched::capacity_boundary(
        cloudsched::rates_for(unit), rc.cluster);
    std::cout << "rho_star = " << star.get_str() << " ("
              << cloudsched::to_decimal_string(star) << ")\n";
  } catch (const ConfigError&) {
    std::cout << "rho_star = undefined (zero rate direction)\n";
  }
  const auto rates = cloudsched::rates_for(rc);
  cloudsched::StaticCostResult res;
  try {
    res = cloudsched::solve_static_cost(rates, rc.cluster, rc.costs);
  } catch (const cloudsched::InfeasibleError& e) {
    std::cout << "status = infeasible\n";
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  std::cout << "status = optimal\n";
  std::cout << "cost = " << res.value.get_str() << " ("
            << cloudsched::to_decimal_string(res.value) << ")\n";
  const bool identical = rc.cluster.identical_servers();
  const int shown = identical ? 1 : rc.cluster.servers();
  for (int l = 0; l < shown; ++l) {
    std::cout << (identical ? "mixture (every server):"
                            : "mixture server " + std::to_string(l) + ":")
              << '\n';
    const auto& set = rc.cluster.feasible(l);
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& p = res.policy.mixture[l][i];
      if (sgn(p) == 0) continue;
      std::cout << "  (";
      for (int m = 0; m < set[i].types(); ++m) {
        std::cout << (m ? "," : "") << set[i][m];
      }
      std::cout << ") " << p.get_str() << '\n';
    }
  }
  return 0;
}

int cmd_figures(const std::string& id, const std::string& outdir,
                int64_t horizon, int reps, const CommonFlags& flags) {
  std::optional<uint64_t> seed = flags.seed;
  if (!seed) seed = env_seed();
  const auto panels =
      cloudsched::figure_panels(id, horizon, seed.value_or(1), reps);
  std::filesystem::create_directories(outdir);
  int status = 0;
  for (const auto& panel : panels) {
    const auto rows = cloudsched::sweep(panel.base, panel.axis, panel.values,
                                        panel.replications, flags.jobs);
    json effective = cloudsched::describe(panel.base);
    effective["sweep"] = {{"axis", cloudsched::to_string(panel.axis)},
                          {"values", panel.values},
                          {"replications", panel.replications}};
    const std::string path =
        (std::filesystem::path(outdir) / (panel.name + ".csv")).string();
    emit(rows, effective, path);
    if (!flags.quiet) std::cerr << "wrote " << path << '\n';
    status = std::max(status, consistency_status(rows));
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scheduling simulator for VM clusters with job migration."};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&flags](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", flags.config, "experiment JSON");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--override", flags.overrides,
                    "KEY=VALUE applied on top of the file (repeatable)");
    cmd->add_option("--seed", flags.seed, "seed (beats file and env)");
    cmd->add_option("--jobs", flags.jobs, "parallel replications");
    cmd->add_flag("--quiet", flags.quiet, "no summary on stderr");
  };

  auto* run = app.add_subcommand("run", "single run, or the file's sweep");
  add_common(run, true);
  run->add_option("--out", flags.out, "CSV path (default stdout)");

  std::string axis;
  std::vector<double> values;
  int reps = 0;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  add_common(sweep, true);
  sweep->add_option("--out", flags.out, "CSV path (default stdout)");
  sweep->add_option("--axis", axis, "rho, V, U or alpha");
  sweep->add_option("--values", values, "axis values")->delimiter(',');
  sweep->add_option("--reps", reps, "replications per value");

  auto* opt = app.add_subcommand("opt", "static cost LP and capacity boundary");
  add_common(opt, true);

  std::string figure;
  std::string outdir = "figures";
  int64_t horizon = 200'000;
  int fig_reps = 5;
  auto* figures = app.add_subcommand("figures", "built-in figure sweeps");
  add_common(figures, false);
  figures->add_option("id", figure, "fig3 .. fig12")->required();
  figures->add_option("--out", outdir, "output directory");
  figures->add_option("--horizon", horizon, "slots per run");
  figures->add_option("--reps", fig_reps, "replications per value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(flags);
    if (sweep->parsed()) return cmd_sweep(flags, axis, values, reps);
    if (opt->parsed()) return cmd_opt(flags);
    if (figures->parsed()) {
      return cmd_figures(figure, outdir, horizon, fig_reps, flags);
    }
  } catch (const cloudsched::ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const cloudsched::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
