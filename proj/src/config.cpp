// Copyright 2026 The dpform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpform/config.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include "dpform/errors.hpp"

namespace dpform {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw ValidationError(path + ": " + reason);
}

const json& require(const json& doc, const std::string& key,
                    const std::string& path) {
  if (!doc.is_object() || !doc.contains(key)) {
    fail(path + "." + key, "missing required field");
  }
  return doc.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

Eigen::MatrixXd as_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a nested array");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) fail(path, "expected row-major nested arrays");
  Eigen::MatrixXd m(v.size(), cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      fail(path, "rows must have equal length");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = as_number(v[i][j], path);
    }
  }
  return m;
}

Eigen::VectorXd as_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected an array of numbers");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(i) = as_number(v[i], path);
  }
  return out;
}

std::vector<double> scalar_or_list(const json& v, int count,
                                   const std::string& path) {
  std::vector<double> out;
  if (v.is_number()) {
    out.assign(count, v.get<double>());
  } else if (v.is_array()) {
    if (static_cast<int>(v.size()) != count) {
      fail(path, "expected " + std::to_string(count) + " entries");
    }
    for (const auto& entry : v) out.push_back(as_number(entry, path));
  } else {
    fail(path, "expected a number or an array");
  }
  return out;
}

Schedule parse_schedule(const json& doc, const std::string& path) {
  const std::string family =
      require(doc, "family", path).get<std::string>();
  try {
    if (family == "power") {
      return Schedule::power(as_number(require(doc, "a", path), path + ".a"),
                             as_number(require(doc, "p", path), path + ".p"));
    }
    if (family == "exp_sqrt") {
      return Schedule::exp_sqrt(
          as_number(require(doc, "b", path), path + ".b"));
    }
    if (family == "constant") {
      return Schedule::constant(
          as_number(require(doc, "value", path), path + ".value"));
    }
    if (family == "table") {
      const auto values = require(doc, "values", path);
      std::vector<double> table;
      for (const auto& v : values) {
        table.push_back(as_number(v, path + ".values"));
      }
      return Schedule::from_table(std::move(table));
    }
  } catch (const NonPositiveParameter& e) {
    fail(path, e.what());
  }
  fail(path + ".family", "unknown schedule family '" + family + "'");
}

Graph parse_graph(const json& doc, const std::string& path) {
  const int n = as_int(require(doc, "n_agents", path), path + ".n_agents");
  if (n < 1) fail(path + ".n_agents", "must be positive");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : require(doc, "edges", path)) {
    if (!e.is_array() || e.size() != 2) {
      fail(path + ".edges", "each edge must be a [i, j] pair");
    }
    // 1-based in the file, 0-based internally.
    edges.emplace_back(as_int(e[0], path + ".edges") - 1,
                       as_int(e[1], path + ".edges") - 1);
  }
  try {
    return Graph::build(n, edges);
  } catch (const Error& e) {
    fail(path, std::string(e.name()) + ": " + e.what());
  }
}

FormationSpec parse_formation(const json& doc, const Graph& graph, int dim,
                              const std::string& path) {
  FormationSpec spec;
  spec.d.assign(graph.n_edges(), Eigen::VectorXd());
  for (const auto& item : require(doc, "d", path)) {
    const auto& edge = require(item, "edge", path + ".d");
    if (!edge.is_array() || edge.size() != 2) {
      fail(path + ".d", "each entry needs \"edge\": [i, j]");
    }
    const int u = as_int(edge[0], path + ".d.edge") - 1;
    const int v = as_int(edge[1], path + ".d.edge") - 1;
    int index = -1;
    try {
      index = graph.edge_index(u, v);
    } catch (const InvalidEdge&) {
      fail(path + ".d", "edge (" + std::to_string(u + 1) + "," +
                            std::to_string(v + 1) + ") is not in the graph");
    }
    Eigen::VectorXd value =
        as_vector(require(item, "value", path + ".d"), path + ".d.value");
    if (value.size() != dim) {
      fail(path + ".d.value", "dimension must match the state dimension");
    }
    if (spec.d[index].size() != 0) {
      fail(path + ".d", "duplicate offset for edge l_" +
                            std::to_string(index + 1));
    }
    // Canonical orientation is lower -> higher; a reversed entry is the
    // antisymmetric image.
    spec.d[index] = (u < v) ? value : Eigen::VectorXd(-value);
  }
  for (int e = 0; e < graph.n_edges(); ++e) {
    if (spec.d[e].size() == 0) {
      fail(path + ".d",
           "missing offset for edge l_" + std::to_string(e + 1));
    }
  }
  return spec;
}

ChannelParams parse_channel(const json& doc, const Graph& graph,
                            const std::string& path) {
  ChannelParams params;
  if (doc.contains("k1") || doc.contains("k2")) {
    if (!doc.contains("k1") || !doc.contains("k2")) {
      fail(path, "k1 and k2 must be given together");
    }
    const auto k1 =
        scalar_or_list(doc.at("k1"), graph.n_edges(), path + ".k1");
    const auto k2 =
        scalar_or_list(doc.at("k2"), graph.n_edges(), path + ".k2");
    for (int e = 0; e < graph.n_edges(); ++e) {
      try {
        params.sigma.push_back(derive_sigma(k1[e], k2[e]));
      } catch (const NonPositiveParameter& err) {
        fail(path, err.what());
      }
    }
  } else {
    params.sigma = scalar_or_list(require(doc, "sigma", path),
                                  graph.n_edges(), path + ".sigma");
  }
  params.r =
      scalar_or_list(require(doc, "r", path), graph.n_agents(), path + ".r");
  params.alpha = doc.contains("alpha")
                     ? as_number(doc.at("alpha"), path + ".alpha")
                     : 1.0;
  try {
    params.validate(graph.n_agents(), graph.n_edges());
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return params;
}

ControlConfig parse_control(const json& doc, const Graph& graph, int dim,
                            const std::string& path) {
  ControlConfig control;
  const Eigen::MatrixXd q = as_matrix(require(doc, "Q", path), path + ".Q");
  const Eigen::MatrixXd r = as_matrix(require(doc, "R", path), path + ".R");
  control.Q.assign(graph.n_agents(), q);
  control.R.assign(graph.n_agents(), r);
  if (doc.contains("per_agent")) {
    for (const auto& item : doc.at("per_agent")) {
      const int agent =
          as_int(require(item, "agent", path + ".per_agent"),
                 path + ".per_agent.agent") - 1;
      if (agent < 0 || agent >= graph.n_agents()) {
        fail(path + ".per_agent.agent", "agent id out of range");
      }
      if (item.contains("Q")) {
        control.Q[agent] = as_matrix(item.at("Q"), path + ".per_agent.Q");
      }
      if (item.contains("R")) {
        control.R[agent] = as_matrix(item.at("R"), path + ".per_agent.R");
      }
    }
  }
  control.horizon_T = as_int(require(doc, "T", path), path + ".T");
  control.theta = as_number(require(doc, "theta", path), path + ".theta");
  try {
    control.validate(graph.n_agents());
    for (int i = 0; i < graph.n_agents(); ++i) {
      if (control.Q[i].rows() != dim) {
        fail(path, "Q must be state_dim x state_dim");
      }
    }
  } catch (const Error& e) {
    fail(path, std::string(e.name()) + ": " + e.what());
  }
  return control;
}

}  // namespace

SimConfig parse_config(const json& doc) {
  SimConfig config;
  config.scenario.graph = parse_graph(require(doc, "graph", "config"),
                                      "config.graph");
  const Graph& graph = config.scenario.graph;

  config.scenario.x0 = as_matrix(require(doc, "initial_states", "config"),
                                 "config.initial_states");
  if (config.scenario.x0.rows() != graph.n_agents()) {
    fail("config.initial_states", "expected one row per agent");
  }
  const int dim = static_cast<int>(config.scenario.x0.cols());

  const json& formation = require(doc, "formation", "config");
  config.scenario.formation =
      parse_formation(formation, graph, dim, "config.formation");

  config.scenario.channel = parse_channel(require(doc, "channel", "config"),
                                          graph, "config.channel");

  // theta lives next to the formation database it bounds.
  json control_doc = require(doc, "control", "config");
  if (!control_doc.contains("theta")) {
    control_doc["theta"] = require(formation, "theta", "config.formation");
  }
  config.scenario.control =
      parse_control(control_doc, graph, dim, "config.control");

  const json& schedules = require(doc, "schedules", "config");
  config.scenario.c_schedule =
      parse_schedule(require(schedules, "c", "config.schedules"),
                     "config.schedules.c");
  config.delta_schedule =
      parse_schedule(require(schedules, "delta", "config.schedules"),
                     "config.schedules.delta");

  // Lemma-domain check for the failure probability at the window start.
  double delta0 = 0.0;
  try {
    delta0 = config.delta_schedule(0);
  } catch (const Error& e) {
    fail("config.schedules.delta", e.what());
  }
  if (!(delta0 > 0.0) || !(delta0 < 0.5)) {
    fail("config.schedules.delta", "delta_0 must lie in (0, 1/2), got " +
                                       std::to_string(delta0));
  }

  if (doc.contains("horizon")) {
    config.horizon = as_int(doc.at("horizon"), "config.horizon");
    if (config.horizon < 0) fail("config.horizon", "must be >= 0");
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned() &&
        !doc.at("seed").is_number_integer()) {
      fail("config.seed", "expected an unsigned integer");
    }
    config.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("runs")) {
    config.runs = as_int(doc.at("runs"), "config.runs");
    if (config.runs < 1) fail("config.runs", "must be >= 1");
  }
  if (doc.contains("out")) {
    config.out_dir = doc.at("out").get<std::string>();
  }
  if (doc.contains("flags")) {
    const json& flags = doc.at("flags");
    config.zero_noise = flags.value("zero_noise", false);
    config.realized_audit = flags.value("realized_audit", false);
    config.global_rho = flags.value("global_rho", false);
  }
  config.scenario.noise =
      config.zero_noise ? NoiseMode::kZero : NoiseMode::kIndependent;

  try {
    config.scenario.validate();
  } catch (const Error& e) {
    fail("config", std::string(e.name()) + ": " + e.what());
  }
  return config;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

namespace {

json schedule_to_json(const Schedule& s) {
  json out;
  out["family"] = s.family_name();
  switch (s.family) {
    case ScheduleFamily::kPower:
      out["a"] = s.a;
      out["p"] = s.p;
      break;
    case ScheduleFamily::kExpSqrt:
      out["b"] = s.b;
      break;
    case ScheduleFamily::kConstant:
      out["value"] = s.value;
      break;
    case ScheduleFamily::kTable:
      out["values"] = s.table;
      break;
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json config_to_json(const SimConfig& config) {
  const Scenario& sc = config.scenario;
  json doc;
  doc["graph"]["n_agents"] = sc.graph.n_agents();
  json edges = json::array();
  for (const auto& e : sc.graph.edges()) {
    edges.push_back({e.a + 1, e.b + 1});
  }
  doc["graph"]["edges"] = edges;
  doc["initial_states"] = matrix_to_json(sc.x0);
  doc["formation"]["theta"] = sc.control.theta;
  json offsets = json::array();
  for (int e = 0; e < sc.graph.n_edges(); ++e) {
    const auto& edge = sc.graph.edges()[e];
    json item;
    item["edge"] = {edge.a + 1, edge.b + 1};
    item["value"] = std::vector<double>(
        sc.formation.d[e].data(),
        sc.formation.d[e].data() + sc.formation.d[e].size());
    offsets.push_back(item);
  }
  doc["formation"]["d"] = offsets;
  doc["channel"]["sigma"] = sc.channel.sigma;
  doc["channel"]["r"] = sc.channel.r;
  doc["channel"]["alpha"] = sc.channel.alpha;
  doc["control"]["Q"] = matrix_to_json(sc.control.Q.front());
  doc["control"]["R"] = matrix_to_json(sc.control.R.front());
  json per_agent = json::array();
  for (int i = 1; i < sc.graph.n_agents(); ++i) {
    if (sc.control.Q[i] != sc.control.Q.front() ||
        sc.control.R[i] != sc.control.R.front()) {
      json item;
      item["agent"] = i + 1;
      item["Q"] = matrix_to_json(sc.control.Q[i]);
      item["R"] = matrix_to_json(sc.control.R[i]);
      per_agent.push_back(item);
    }
  }
  if (!per_agent.empty()) doc["control"]["per_agent"] = per_agent;
  doc["control"]["T"] = sc.control.horizon_T;
  doc["control"]["theta"] = sc.control.theta;
  doc["schedules"]["c"] = schedule_to_json(sc.c_schedule);
  doc["schedules"]["delta"] = schedule_to_json(config.delta_schedule);
  doc["horizon"] = config.horizon;
  doc["seed"] = config.seed;
  doc["runs"] = config.runs;
  doc["out"] = config.out_dir;
  doc["flags"]["zero_noise"] = config.zero_noise;
  doc["flags"]["realized_audit"] = config.realized_audit;
  doc["flags"]["global_rho"] = config.global_rho;
  return doc;
}

}  // namespace dpform
