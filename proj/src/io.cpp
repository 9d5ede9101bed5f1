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

#include "dpform/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dpform/errors.hpp"

namespace dpform::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("IoError", "cannot open '" + path + "' for writing");
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path) {
  auto out = open_out(path);
  out << "t,agent,dim,x\n";
  for (std::size_t t = 0; t < log.x.size(); ++t) {
    const auto& x = log.x[t];
    for (Eigen::Index agent = 0; agent < x.rows(); ++agent) {
      for (Eigen::Index d = 0; d < x.cols(); ++d) {
        out << t << ',' << agent + 1 << ',' << d + 1 << ','
            << format_double(x(agent, d)) << '\n';
      }
    }
  }
}

void write_edge_errors_csv(const TrajectoryLog& log, const Graph& graph,
                           const std::string& path) {
  auto out = open_out(path);
  out << "t,edge,dim,xi\n";
  const int n_edges = graph.n_edges();
  for (std::size_t t = 0; t < log.xi.size(); ++t) {
    const auto& xi = log.xi[t];
    const Eigen::Index dim = n_edges > 0 ? xi.size() / n_edges : 0;
    for (int e = 0; e < n_edges; ++e) {
      for (Eigen::Index d = 0; d < dim; ++d) {
        out << t << ',' << e + 1 << ',' << d + 1 << ','
            << format_double(xi(e * dim + d)) << '\n';
      }
    }
  }
}

nlohmann::json mc_stats_to_json(const MCStats& stats) {
  nlohmann::json doc;
  doc["runs"] = stats.runs;
  doc["mean_sq"] = stats.mean_sq;
  doc["mean_xi_final"] = std::vector<double>(
      stats.mean_xi_final.data(),
      stats.mean_xi_final.data() + stats.mean_xi_final.size());
  doc["var_xi_final"] = std::vector<double>(
      stats.var_xi_final.data(),
      stats.var_xi_final.data() + stats.var_xi_final.size());
  nlohmann::json finals = nlohmann::json::array();
  for (const auto& xi : stats.final_xi) {
    finals.push_back(std::vector<double>(xi.data(), xi.data() + xi.size()));
  }
  doc["final_xi"] = finals;
  return doc;
}

nlohmann::json ledger_to_json(const privacy::PrivacyLedger& ledger) {
  nlohmann::json doc;
  const auto [eps, delta] = ledger.compose(ledger.t_begin, ledger.t_end);
  doc["eps_total"] = eps;
  doc["delta_total"] = delta;
  // The delta sum is index-convention sensitive; both readings are always
  // reported so the t = 0 term is never hidden.
  if (ledger.t_begin == 0 && ledger.t_end >= 1) {
    const auto [eps1, delta1] = ledger.compose(1, ledger.t_end);
    doc["delta_total_from1"] = delta1;
    doc["eps_total_from1"] = eps1;
  } else {
    doc["delta_total_from1"] = delta;
    doc["eps_total_from1"] = eps;
  }
  doc["window"] = {ledger.t_begin, ledger.t_end};
  doc["r_floor"] = ledger.r_floor;
  doc["theta"] = ledger.theta;
  doc["rho_mode"] =
      ledger.rho_mode == privacy::RhoMode::kGlobal ? "global" : "per_time";
  doc["variance_mode"] = ledger.variance_mode == privacy::VarianceMode::kFloor
                             ? "floor"
                             : "realized";
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& rec : ledger.records) {
    steps.push_back({{"t", rec.t},
                     {"delta_sens", rec.delta_sens},
                     {"eps", rec.eps},
                     {"delta", rec.delta}});
  }
  doc["per_step"] = steps;
  return doc;
}

void write_ledger_csv(const privacy::PrivacyLedger& ledger,
                      const std::string& path) {
  auto out = open_out(path);
  out << "t,delta_sens,eps,delta\n";
  for (const auto& rec : ledger.records) {
    out << rec.t << ',' << format_double(rec.delta_sens) << ','
        << format_double(rec.eps) << ',' << format_double(rec.delta) << '\n';
  }
}

void write_gains_csv(const GainSchedule& gains, const std::string& path) {
  auto out = open_out(path);
  out << "t,agent,row,col,k\n";
  for (int t = 0; t < gains.horizon(); ++t) {
    for (int i = 0; i < gains.n_agents(); ++i) {
      const auto& k = gains.gain(i, t);
      for (Eigen::Index r = 0; r < k.rows(); ++r) {
        for (Eigen::Index c = 0; c < k.cols(); ++c) {
          out << t << ',' << i + 1 << ',' << r + 1 << ',' << c + 1 << ','
              << format_double(k(r, c)) << '\n';
        }
      }
    }
  }
}

void write_rho_csv(const GainSchedule& gains, const Schedule& c,
                   const std::string& path) {
  auto out = open_out(path);
  out << "t,c,rho_K,c_rho_K\n";
  for (int t = 0; t < gains.horizon(); ++t) {
    const double c_t = c(t);
    const double rho = gains.rho_at(t);
    out << t << ',' << format_double(c_t) << ',' << format_double(rho) << ','
        << format_double(c_t * rho) << '\n';
  }
}

nlohmann::json admissibility_to_json(const privacy::AdmissibilityReport& r) {
  nlohmann::json doc;
  doc["mode"] =
      r.mode == privacy::ValidateMode::kAnalytic ? "analytic" : "partial-sum";
  doc["c_positive"] = r.c_positive;
  doc["c_l2"] = r.c_l2;
  doc["c_l1"] = r.c_l1;
  doc["delta_l1"] = r.delta_l1;
  doc["cross_l1"] = r.cross_l1;
  doc["delta_domain"] = r.delta_domain;
  doc["admissible"] = r.admissible;
  doc["c_l2_not_l1"] = r.c_l2_not_l1;
  doc["rationale"] = r.rationale;
  if (!r.diagnostics.empty()) {
    nlohmann::json series = nlohmann::json::array();
    for (const auto& diag : r.diagnostics) {
      nlohmann::json item;
      item["name"] = diag.name;
      item["horizons"] = diag.horizons;
      item["partial_sums"] = diag.partial_sums;
      item["last_increment_ratio"] = diag.last_increment_ratio;
      item["appears_convergent"] = diag.appears_convergent;
      series.push_back(item);
    }
    doc["partial_sums"] = series;
  }
  return doc;
}

std::string export_plot_data(const std::string& figure,
                             const TrajectoryLog* log, const Graph* graph,
                             const privacy::PrivacyLedger* ledger,
                             const std::string& out_dir) {
  namespace fs = std::filesystem;
  const std::string path = (fs::path(out_dir) / (figure + ".csv")).string();
  if (figure == "fig1a") {
    if (!log || !graph) throw ValidationError("fig1a needs a trajectory");
    auto out = open_out(path);
    out << "t,edge,dim,relative_state\n";
    for (std::size_t t = 0; t < log->x.size(); ++t) {
      for (int e = 0; e < graph->n_edges(); ++e) {
        const auto& edge = graph->edges()[e];
        const Eigen::VectorXd rel = log->x[t].row(edge.a).transpose() -
                                    log->x[t].row(edge.b).transpose();
        for (Eigen::Index d = 0; d < rel.size(); ++d) {
          out << t << ',' << e + 1 << ',' << d + 1 << ','
              << format_double(rel(d)) << '\n';
        }
      }
    }
    return path;
  }
  if (figure == "fig1b") {
    if (!ledger) throw ValidationError("fig1b needs a privacy ledger");
    auto out = open_out(path);
    out << "t,eps_cumulative\n";
    double cumulative = 0.0;
    for (const auto& rec : ledger->records) {
      cumulative += rec.eps;
      out << rec.t << ',' << format_double(cumulative) << '\n';
    }
    return path;
  }
  if (figure == "fig2") {
    if (!log) throw ValidationError("fig2 needs a trajectory");
    if (log->x.empty() || log->x.front().cols() != 2) {
      throw ValidationError("fig2 is defined for 2-D states");
    }
    auto out = open_out(path);
    out << "agent,t,x,y\n";
    for (Eigen::Index agent = 0; agent < log->x.front().rows(); ++agent) {
      for (std::size_t t = 0; t < log->x.size(); ++t) {
        out << agent + 1 << ',' << t << ','
            << format_double(log->x[t](agent, 0)) << ','
            << format_double(log->x[t](agent, 1)) << '\n';
      }
    }
    return path;
  }
  throw UnknownFigure("unknown figure id '" + figure + "'");
}

}  // namespace dpform::io
