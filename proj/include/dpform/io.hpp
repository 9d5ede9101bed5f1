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

#ifndef DPFORM_IO_HPP
#define DPFORM_IO_HPP

#include <string>

#include <json.hpp>

#include "dpform/engine.hpp"
#include "dpform/privacy.hpp"

namespace dpform::io {

// Shortest-round-trip decimal for doubles; output is deterministic for a
// given (config, seed).
std::string format_double(double v);

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path);
void write_edge_errors_csv(const TrajectoryLog& log, const Graph& graph,
                           const std::string& path);

nlohmann::json mc_stats_to_json(const MCStats& stats);

nlohmann::json ledger_to_json(const privacy::PrivacyLedger& ledger);
void write_ledger_csv(const privacy::PrivacyLedger& ledger,
                      const std::string& path);

void write_gains_csv(const GainSchedule& gains, const std::string& path);
void write_rho_csv(const GainSchedule& gains, const Schedule& c,
                   const std::string& path);

nlohmann::json admissibility_to_json(const privacy::AdmissibilityReport& r);

// Plot-ready per-figure CSVs. Known ids: fig1a (relative states per
// edge/dim vs t), fig1b (cumulative eps vs t), fig2 (agent xy paths, 2-D
// states only). Returns the written path; throws UnknownFigure, and
// ValidationError when the needed input is absent.
std::string export_plot_data(const std::string& figure,
                             const TrajectoryLog* log, const Graph* graph,
                             const privacy::PrivacyLedger* ledger,
                             const std::string& out_dir);

void write_text(const std::string& path, const std::string& content);

}  // namespace dpform::io

#endif  // DPFORM_IO_HPP
