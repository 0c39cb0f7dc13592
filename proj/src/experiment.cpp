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

#include "cloudsched/experiment.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace cloudsched {

using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError(path + ":" + std::to_string(line) +
                      ": invalid JSON: " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not KEY=VALUE");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("bad override key '" + key + "'");
    if (!node->is_object()) {
      throw ConfigError("override '" + key + "' descends into a non-object");
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

namespace {

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields = {
      "servers",  "vm_types",   "max_job_size", "maximal_configs",
      "resources", "rho",       "rate_shape",   "rate_table",
      "a_max",    "scheduler",  "U",            "V",
      "alpha",    "frame_len",  "cost_model",   "c0",
      "c",        "horizon",    "warmup",       "seed",
      "check_invariants", "sweep", "output"};
  return fields;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw ConfigError("field '" + field + "': " + why);
}

const json& require(const json& doc, const std::string& field) {
  auto it = doc.find(field);
  if (it == doc.end()) bad_field(field, "missing required field");
  return *it;
}

int64_t as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad_field(field, "expected an integer");
  return v.get<int64_t>();
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) bad_field(field, "expected a number");
  return v.get<double>();
}

Rational as_rational(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) return rational_from_double(v.get<double>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const ConfigError& e) {
      bad_field(field, e.what());
    }
  }
  bad_field(field, "expected a number or a rational string like \"3/2\"");
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) bad_field(field, "expected a string");
  return v.get<std::string>();
}

template <typename T>
T value_or(const json& doc, const std::string& field, T fallback,
           T (*convert)(const json&, const std::string&)) {
  auto it = doc.find(field);
  return it == doc.end() ? fallback : convert(*it, field);
}

ClusterModel parse_cluster(const json& doc, json& effective) {
  const int64_t servers = as_int(require(doc, "servers"), "servers");
  const int64_t types = as_int(require(doc, "vm_types"), "vm_types");
  const int64_t size = as_int(require(doc, "max_job_size"), "max_job_size");
  if (servers < 1) bad_field("servers", "must be >= 1");
  if (types < 1) bad_field("vm_types", "must be >= 1");
  if (size < 1) bad_field("max_job_size", "must be >= 1");
  const bool has_max = doc.contains("maximal_configs");
  const bool has_res = doc.contains("resources");
  if (has_max == has_res) {
    bad_field("maximal_configs",
              "give exactly one of maximal_configs or resources");
  }
  ConfigSet feasible;
  if (has_max) {
    const json& list = doc["maximal_configs"];
    if (!list.is_array() || list.empty()) {
      bad_field("maximal_configs", "expected a non-empty list of configs");
    }
    ConfigSet maximal;
    for (const auto& row : list) {
      if (!row.is_array() || static_cast<int64_t>(row.size()) != types) {
        bad_field("maximal_configs",
                  "each config needs vm_types = " + std::to_string(types) +
                      " entries");
      }
      std::vector<int> counts;
      for (const auto& x : row) {
        const int64_t c = as_int(x, "maximal_configs");
        if (c < 0) bad_field("maximal_configs", "counts must be >= 0");
        counts.push_back(static_cast<int>(c));
      }
      maximal.emplace_back(std::move(counts));
    }
    feasible = feasible_from_maximal(maximal);
  } else {
    const json& res = doc["resources"];
    if (!res.is_object()) bad_field("resources", "expected an object");
    for (auto it = res.begin(); it != res.end(); ++it) {
      if (it.key() != "capacity" && it.key() != "demands") {
        bad_field("resources." + it.key(), "unknown field");
      }
    }
    const json& cap = require(res, "capacity");
    const json& dem = require(res, "demands");
    if (!cap.is_array() || cap.empty()) {
      bad_field("resources.capacity", "expected a non-empty list");
    }
    std::vector<Rational> capacity;
    for (const auto& x : cap) {
      capacity.push_back(as_rational(x, "resources.capacity"));
    }
    if (!dem.is_array() || static_cast<int64_t>(dem.size()) != types) {
      bad_field("resources.demands", "expected one demand vector per VM type");
    }
    std::vector<ResourceVector> demands;
    for (const auto& row : dem) {
      if (!row.is_array()) bad_field("resources.demands", "expected lists");
      std::vector<Rational> d;
      for (const auto& x : row) d.push_back(as_rational(x, "resources.demands"));
      demands.emplace_back(std::move(d));
    }
    try {
      feasible = feasible_from_resources(ResourceVector(capacity), demands);
    } catch (const ConfigError& e) {
      bad_field("resources", e.what());
    }
  }
  if (feasible.front().types() != types) {
    bad_field("vm_types", "does not match the configuration vectors");
  }
  (void)effective;
  return ClusterModel::identical(static_cast<int>(servers), feasible,
                                 static_cast<int>(size));
}

}  // namespace

Experiment parse_experiment(const json& doc,
                            std::optional<uint64_t> seed_fallback) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known_fields().count(it.key())) bad_field(it.key(), "unknown field");
  }
  Experiment ex;
  ex.effective = doc;
  json& eff = ex.effective;
  RunConfig& rc = ex.run;
  rc.cluster = parse_cluster(doc, eff);
  const int types = rc.cluster.vm_types();
  const int size = rc.cluster.max_job_size();

  rc.scheduler =
      parse_scheduler(as_string(require(doc, "scheduler"), "scheduler"));
  rc.horizon = as_int(require(doc, "horizon"), "horizon");
  if (rc.horizon < 1) bad_field("horizon", "must be >= 1");
  rc.warmup = value_or<int64_t>(doc, "warmup", rc.horizon / 5, as_int);
  if (rc.warmup < 0 || rc.warmup >= rc.horizon) {
    bad_field("warmup", "must satisfy 0 <= warmup < horizon");
  }
  eff["warmup"] = rc.warmup;

  if (doc.contains("rho")) {
    rc.rho = as_rational(doc["rho"], "rho");
  } else {
    rc.rho = Rational(1);
    eff["rho"] = 1;
  }
  if (sgn(rc.rho) < 0) bad_field("rho", "must be >= 0");

  const std::string shape = value_or<std::string>(
      doc, "rate_shape", doc.contains("rate_table") ? "table" : "reference",
      as_string);
  eff["rate_shape"] = shape;
  try {
    rc.rate_shape = parse_rate_shape(shape);
  } catch (const ConfigError& e) {
    bad_field("rate_shape", e.what());
  }
  if (rc.rate_shape == RateShape::kTable) {
    const json& table = require(doc, "rate_table");
    if (!table.is_array() || static_cast<int>(table.size()) != types) {
      bad_field("rate_table", "expected vm_types rows");
    }
    rc.rate_table = RateMatrix(types, size);
    for (int m = 0; m < types; ++m) {
      if (!table[m].is_array() || static_cast<int>(table[m].size()) != size) {
        bad_field("rate_table", "each row needs max_job_size entries");
      }
      for (int j = 0; j < size; ++j) {
        const Rational r = as_rational(table[m][j], "rate_table");
        if (sgn(r) < 0) bad_field("rate_table", "rates must be >= 0");
        rc.rate_table.set(m, j, r);
      }
    }
  } else if (doc.contains("rate_table")) {
    bad_field("rate_table", "only allowed with rate_shape \"table\"");
  }

  rc.a_max = static_cast<int>(value_or<int64_t>(doc, "a_max", 10, as_int));
  if (rc.a_max < 1) bad_field("a_max", "must be >= 1");
  eff["a_max"] = rc.a_max;
  rc.frame_len =
      static_cast<int>(value_or<int64_t>(doc, "frame_len", 60, as_int));
  if (rc.frame_len < size) bad_field("frame_len", "must be >= max_job_size");
  eff["frame_len"] = rc.frame_len;

  CostParams& p = rc.costs;
  const std::string model = value_or<std::string>(
      doc, "cost_model", doc.contains("c") ? "affine" : "binary", as_string);
  eff["cost_model"] = model;
  try {
    p.model = parse_cost_model(model);
  } catch (const ConfigError& e) {
    bad_field("cost_model", e.what());
  }
  p.c0 = value_or<double>(doc, "c0", 1.0, as_number);
  eff["c0"] = p.c0;
  if (doc.contains("c")) {
    const json& c = doc["c"];
    if (!c.is_array()) bad_field("c", "expected a list");
    for (const auto& x : c) p.c.push_back(as_number(x, "c"));
  }
  if (p.model == CostModel::kAffine && static_cast<int>(p.c.size()) != types) {
    bad_field("c", "affine cost needs one entry per VM type");
  }
  p.U = value_or<double>(doc, "U", 0.0, as_number);
  p.V = value_or<double>(doc, "V", 0.0, as_number);
  p.alpha = value_or<double>(doc, "alpha", 0.5, as_number);
  eff["U"] = p.U;
  eff["V"] = p.V;
  eff["alpha"] = p.alpha;
  if (!(p.U >= 0)) bad_field("U", "must be >= 0");
  if (!(p.V >= 0)) bad_field("V", "must be >= 0");
  if (!(p.c0 >= 0)) bad_field("c0", "must be >= 0");
  if (!(p.alpha > 0 && p.alpha < 1)) bad_field("alpha", "must be in (0, 1)");

  if (doc.contains("seed")) {
    const int64_t s = as_int(doc["seed"], "seed");
    if (s < 0) bad_field("seed", "must be >= 0");
    rc.seed = static_cast<uint64_t>(s);
  } else {
    rc.seed = seed_fallback.value_or(1);
    eff["seed"] = rc.seed;
  }
  rc.check_invariants = doc.value("check_invariants", true);
  eff["check_invariants"] = rc.check_invariants;

  if (doc.contains("sweep")) {
    const json& sw = doc["sweep"];
    if (!sw.is_object()) bad_field("sweep", "expected an object");
    for (auto it = sw.begin(); it != sw.end(); ++it) {
      if (it.key() != "axis" && it.key() != "values" &&
          it.key() != "replications") {
        bad_field("sweep." + it.key(), "unknown field");
      }
    }
    SweepSpec spec;
    try {
      spec.axis = parse_axis(as_string(require(sw, "axis"), "sweep.axis"));
    } catch (const ConfigError& e) {
      bad_field("sweep.axis", e.what());
    }
    const json& values = require(sw, "values");
    if (!values.is_array() || values.empty()) {
      bad_field("sweep.values", "expected a non-empty list");
    }
    for (const auto& v : values) {
      spec.values.push_back(as_number(v, "sweep.values"));
    }
    spec.replications = static_cast<int>(
        value_or<int64_t>(sw, "replications", 5, as_int));
    if (spec.replications < 1) bad_field("sweep.replications", "must be >= 1");
    eff["sweep"]["replications"] = spec.replications;
    ex.sweep = spec;
  }
  if (doc.contains("output")) ex.output = as_string(doc["output"], "output");

  try {
    rc.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return ex;
}

namespace {

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

json rational_json(const Rational& r) {
  if (r.get_den() == 1 && r.get_num().fits_slong_p()) {
    return r.get_num().get_si();
  }
  return r.get_str();
}

}  // namespace

json describe(const RunConfig& config) {
  const ClusterModel& cl = config.cluster;
  if (!cl.identical_servers()) {
    throw ConfigError("only identical-server clusters can be described");
  }
  json doc;
  doc["servers"] = cl.servers();
  doc["vm_types"] = cl.vm_types();
  doc["max_job_size"] = cl.max_job_size();
  json configs = json::array();
  for (const auto& w : cl.feasible(0)) {
    json row = json::array();
    for (int m = 0; m < w.types(); ++m) row.push_back(w[m]);
    configs.push_back(row);
  }
  doc["maximal_configs"] = configs;
  doc["rho"] = rational_json(config.rho);
  doc["rate_shape"] = to_string(config.rate_shape);
  if (config.rate_shape == RateShape::kTable) {
    json table = json::array();
    for (int m = 0; m < config.rate_table.types(); ++m) {
      json row = json::array();
      for (int j = 0; j < config.rate_table.max_size(); ++j) {
        row.push_back(rational_json(config.rate_table.at(m, j)));
      }
      table.push_back(row);
    }
    doc["rate_table"] = table;
  }
  doc["a_max"] = config.a_max;
  doc["scheduler"] = to_string(config.scheduler);
  doc["cost_model"] = to_string(config.costs.model);
  doc["c0"] = config.costs.c0;
  if (config.costs.model == CostModel::kAffine) doc["c"] = config.costs.c;
  doc["U"] = config.costs.U;
  doc["V"] = config.costs.V;
  doc["alpha"] = config.costs.alpha;
  doc["frame_len"] = config.frame_len;
  doc["horizon"] = config.horizon;
  doc["warmup"] = config.warmup;
  doc["seed"] = config.seed;
  doc["check_invariants"] = config.check_invariants;
  return doc;
}

const std::string& csv_header() {
  static const std::string header =
      "scheduler,rho,V,U,alpha,seed,T,warmup,mean_queue_len,"
      "mean_weighted_backlog,mean_server_cost,mean_active_servers,"
      "mean_migrations,mean_migration_cost";
  return header;
}

std::string csv_row(const RunMetrics& m) {
  std::string row = m.scheduler;
  for (double x : {m.rho, m.V, m.U, m.alpha}) row += "," + shortest(x);
  row += "," + std::to_string(m.seed);
  row += "," + std::to_string(m.horizon);
  row += "," + std::to_string(m.warmup);
  for (double x : {m.mean_queue_len, m.mean_weighted_backlog,
                   m.mean_server_cost, m.mean_active_servers,
                   m.mean_migrations, m.mean_migration_cost}) {
    row += "," + shortest(x);
  }
  return row;
}

void write_csv(std::ostream& out, const std::vector<RunMetrics>& rows,
               bool header) {
  if (header) out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

ClusterModel reference_cluster() {
  return ClusterModel::identical(
      10, feasible_from_maximal({{0, 0, 2}, {0, 1, 1}, {1, 1, 0}}), 10);
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {
      "fig3", "fig4", "fig5",  "fig6",  "fig7",
      "fig8", "fig9", "fig10", "fig11", "fig12"};
  return ids;
}

namespace {

const std::vector<double> kRhoValues = {0.2,  0.4,  0.6,  0.8, 0.9,
                                        0.95, 0.97, 0.99, 1.01};

RunConfig figure_base(SchedulerKind kind, bool affine, double V, double U,
                      int64_t horizon, uint64_t seed) {
  RunConfig rc;
  rc.cluster = reference_cluster();
  rc.rate_shape = RateShape::kReference;
  rc.rho = Rational(4, 5);
  rc.scheduler = kind;
  rc.costs.model = affine ? CostModel::kAffine : CostModel::kBinary;
  rc.costs.c0 = 1.0;
  if (affine) rc.costs.c = {2.0, 6.0, 3.0};
  rc.costs.V = V;
  rc.costs.U = U;
  rc.horizon = horizon;
  rc.warmup = horizon / 5;
  rc.seed = seed;
  return rc;
}

std::string alpha_tag(double alpha) { return "alpha" + shortest(alpha); }

}  // namespace

std::vector<FigurePanel> figure_panels(const std::string& id, int64_t horizon,
                                       uint64_t seed, int replications) {
  using K = SchedulerKind;
  std::vector<FigurePanel> out;
  auto add = [&](std::string name, RunConfig base, SweepAxis axis,
                 std::vector<double> values) {
    out.push_back({std::move(name), std::move(base), axis, std::move(values),
                   replications});
  };
  const std::vector<double> online_v = {1, 2, 5, 10, 20, 40};
  const std::vector<double> online_u = {0, 1, 5, 20, 100, 500};
  const std::vector<double> offline_v = {1, 5, 10, 20, 40};

  if (id == "fig3") {
    add("fig3_alg1", figure_base(K::kAlg1, true, 5, 10, horizon, seed),
        SweepAxis::kRho, kRhoValues);
  } else if (id == "fig4") {
    add("fig4_alg1", figure_base(K::kAlg1, true, 0, 10, horizon, seed),
        SweepAxis::kV, online_v);
  } else if (id == "fig5") {
    add("fig5_alg1", figure_base(K::kAlg1, true, 5, 0, horizon, seed),
        SweepAxis::kU, online_u);
  } else if (id == "fig6") {
    add("fig6_alg1", figure_base(K::kAlg1, false, 30, 10, horizon, seed),
        SweepAxis::kRho, kRhoValues);
    add("fig6_alg2", figure_base(K::kAlg2, false, 3, 2, horizon, seed),
        SweepAxis::kRho, kRhoValues);
    add("fig6_preemptive",
        figure_base(K::kPreemptive, false, 0, 0, horizon, seed),
        SweepAxis::kRho, kRhoValues);
    add("fig6_nonpreemptive",
        figure_base(K::kNonpreemptive, false, 0, 0, horizon, seed),
        SweepAxis::kRho, kRhoValues);
  } else if (id == "fig7") {
    add("fig7_alg1", figure_base(K::kAlg1, false, 20, 0, horizon, seed),
        SweepAxis::kU, online_u);
    add("fig7_alg2", figure_base(K::kAlg2, false, 6, 0, horizon, seed),
        SweepAxis::kU, online_u);
    add("fig7_preemptive",
        figure_base(K::kPreemptive, false, 0, 0, horizon, seed),
        SweepAxis::kU, {0});
    add("fig7_nonpreemptive",
        figure_base(K::kNonpreemptive, false, 0, 0, horizon, seed),
        SweepAxis::kU, {0});
  } else if (id == "fig8") {
    add("fig8_alg1", figure_base(K::kAlg1, false, 0, 10, horizon, seed),
        SweepAxis::kV, online_v);
    add("fig8_alg2", figure_base(K::kAlg2, false, 0, 1, horizon, seed),
        SweepAxis::kV, online_v);
    add("fig8_preemptive",
        figure_base(K::kPreemptive, false, 0, 0, horizon, seed),
        SweepAxis::kV, {0});
    add("fig8_nonpreemptive",
        figure_base(K::kNonpreemptive, false, 0, 0, horizon, seed),
        SweepAxis::kV, {0});
  } else if (id == "fig9") {
    for (K kind : {K::kQbmw, K::kRefinedQbmw}) {
      for (double alpha : {0.1, 0.2}) {
        RunConfig base = figure_base(kind, false, 10, 0, horizon, seed);
        base.costs.alpha = alpha;
        add("fig9_" + to_string(kind) + "_" + alpha_tag(alpha), base,
            SweepAxis::kRho, kRhoValues);
      }
    }
  } else if (id == "fig10") {
    for (K kind : {K::kQbmw, K::kRefinedQbmw}) {
      RunConfig base = figure_base(kind, false, 0, 0, horizon, seed);
      base.costs.alpha = 0.1;
      add("fig10_" + to_string(kind), base, SweepAxis::kV, offline_v);
    }
  } else if (id == "fig11") {
    for (K kind : {K::kQbmw, K::kRefinedQbmw}) {
      RunConfig base = figure_base(kind, false, 10, 0, horizon, seed);
      add("fig11_" + to_string(kind), base, SweepAxis::kAlpha,
          {0.1, 0.2, 0.3, 0.5, 0.7, 0.9});
    }
  } else if (id == "fig12") {
    for (K kind : {K::kQbmw, K::kRefinedQbmw}) {
      RunConfig base = figure_base(kind, false, 0, 0, horizon, seed);
      base.cluster = ClusterModel::identical(
          10, feasible_from_maximal({{0, 1}, {3, 0}}), 10);
      base.rate_shape = RateShape::kUniform;
      base.costs.alpha = 0.1;
      add("fig12_" + to_string(kind), base, SweepAxis::kV, offline_v);
    }
  } else {
    std::string known;
    for (const auto& f : figure_ids()) known += (known.empty() ? "" : ", ") + f;
    throw ConfigError("unknown figure id '" + id + "' (expected one of " +
                      known + ")");
  }
  return out;
}

}  // namespace cloudsched
