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

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpform/config.hpp"
#include "dpform/engine.hpp"
#include "dpform/errors.hpp"
#include "dpform/io.hpp"
#include "dpform/privacy.hpp"

namespace {

namespace fs = std::filesystem;
using dpform::SimConfig;
using nlohmann::json;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> horizon;
  std::optional<int> runs;
  bool zero_noise = false;
  bool realized_audit = false;
  bool global_rho = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON experiment config")
      ->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--out", args.out_dir, "override the output directory");
  cmd->add_option("--horizon", args.horizon, "override the horizon");
  cmd->add_option("--runs", args.runs, "override the Monte-Carlo run count");
  cmd->add_flag("--zero-noise", args.zero_noise,
                "force reception noise to zero (test hook)");
  cmd->add_flag("--realized-audit", args.realized_audit,
                "audit against realized link variances instead of the floor");
  cmd->add_flag("--global-rho", args.global_rho,
                "use one uniform gain bound over the window");
}

SimConfig load_with_overrides(const CommonArgs& args) {
  SimConfig config = dpform::load_config(args.config_path);
  if (args.seed) config.seed = *args.seed;
  if (args.out_dir) config.out_dir = *args.out_dir;
  if (args.horizon) {
    if (*args.horizon < 0) {
      throw dpform::ValidationError("--horizon must be >= 0");
    }
    config.horizon = *args.horizon;
  }
  if (args.runs) {
    if (*args.runs < 1) {
      throw dpform::ValidationError("--runs must be >= 1");
    }
    config.runs = *args.runs;
  }
  config.zero_noise = config.zero_noise || args.zero_noise;
  config.realized_audit = config.realized_audit || args.realized_audit;
  config.global_rho = config.global_rho || args.global_rho;
  config.scenario.noise = config.zero_noise ? dpform::NoiseMode::kZero
                                            : dpform::NoiseMode::kIndependent;
  return config;
}

fs::path prepare_out_dir(const SimConfig& config) {
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  return dir;
}

int run_simulate(const SimConfig& config,
                 const std::vector<std::string>& figures) {
  const auto dir = prepare_out_dir(config);
  const int horizon = config.horizon;
  const bool want_fig1b =
      std::find(figures.begin(), figures.end(), "fig1b") != figures.end();
  const dpform::GainSchedule gains = dpform::GainSchedule::compute(
      config.scenario.graph, config.scenario.control,
      config.scenario.c_schedule, horizon + (want_fig1b ? 1 : 0));
  const dpform::TrajectoryLog log =
      dpform::run(config.scenario, gains, config.seed, horizon);

  const std::string traj = (dir / "trajectory.csv").string();
  const std::string errors = (dir / "edge_errors.csv").string();
  dpform::io::write_trajectory_csv(log, traj);
  dpform::io::write_edge_errors_csv(log, config.scenario.graph, errors);

  json summary;
  summary["trajectory_csv"] = traj;
  summary["edge_errors_csv"] = errors;
  summary["final_xi_sq"] = log.xi_sq.back();

  if (!figures.empty()) {
    std::optional<dpform::privacy::PrivacyLedger> ledger;
    if (want_fig1b) {
      ledger = dpform::privacy::build_ledger(
          gains, config.scenario.c_schedule, config.delta_schedule,
          config.scenario.channel.r_floor(), config.scenario.control.theta, 0,
          horizon,
          config.global_rho ? dpform::privacy::RhoMode::kGlobal
                            : dpform::privacy::RhoMode::kPerTime);
    }
    json written = json::array();
    for (const auto& figure : figures) {
      written.push_back(dpform::io::export_plot_data(
          figure, &log, &config.scenario.graph,
          ledger ? &*ledger : nullptr, dir.string()));
    }
    summary["figures"] = written;
  }
  std::cout << summary.dump() << std::endl;
  return 0;
}

int run_monte_carlo(const SimConfig& config, bool serial) {
  const auto dir = prepare_out_dir(config);
  const dpform::GainSchedule gains = dpform::GainSchedule::compute(
      config.scenario.graph, config.scenario.control,
      config.scenario.c_schedule, config.horizon);
  const dpform::MCStats stats = dpform::monte_carlo(
      config.scenario, gains, config.runs, config.horizon, config.seed,
      serial ? dpform::Exec::kSerial : dpform::Exec::kOpenMP);
  const std::string path = (dir / "mc_stats.json").string();
  dpform::io::write_text(path, dpform::io::mc_stats_to_json(stats).dump(2));
  json summary;
  summary["mc_stats_json"] = path;
  summary["runs"] = stats.runs;
  summary["mean_sq_first"] = stats.mean_sq.front();
  summary["mean_sq_last"] = stats.mean_sq.back();
  std::cout << summary.dump() << std::endl;
  return 0;
}

int run_privacy_audit(const SimConfig& config, int from, int to) {
  if (from < 0 || from > to) {
    throw dpform::ValidationError("audit window requires 0 <= from <= to");
  }
  const auto dir = prepare_out_dir(config);
  const dpform::GainSchedule gains = dpform::GainSchedule::compute(
      config.scenario.graph, config.scenario.control,
      config.scenario.c_schedule, to + 1);
  const auto rho_mode = config.global_rho
                            ? dpform::privacy::RhoMode::kGlobal
                            : dpform::privacy::RhoMode::kPerTime;
  dpform::privacy::PrivacyLedger ledger;
  if (config.realized_audit) {
    const dpform::TrajectoryLog log =
        dpform::run(config.scenario, gains, config.seed, to + 1);
    ledger = dpform::privacy::build_realized_ledger(
        gains, config.scenario.c_schedule, config.delta_schedule,
        log.min_link_variance, config.scenario.control.theta, from, to,
        rho_mode);
  } else {
    ledger = dpform::privacy::build_ledger(
        gains, config.scenario.c_schedule, config.delta_schedule,
        config.scenario.channel.r_floor(), config.scenario.control.theta,
        from, to, rho_mode);
  }
  const json doc = dpform::io::ledger_to_json(ledger);
  const std::string json_path = (dir / "privacy_ledger.json").string();
  const std::string csv_path = (dir / "privacy_ledger.csv").string();
  dpform::io::write_text(json_path, doc.dump(2));
  dpform::io::write_ledger_csv(ledger, csv_path);

  json summary;
  summary["privacy_ledger_json"] = json_path;
  summary["privacy_ledger_csv"] = csv_path;
  summary["eps_total"] = doc["eps_total"];
  summary["delta_total"] = doc["delta_total"];
  summary["delta_total_from1"] = doc["delta_total_from1"];
  std::cout << summary.dump() << std::endl;
  return 0;
}

int run_validate(const SimConfig& config, const std::string& mode) {
  const auto dir = prepare_out_dir(config);
  const auto report = dpform::privacy::validate_schedules(
      config.scenario.c_schedule, config.delta_schedule,
      mode == "partial-sum" ? dpform::privacy::ValidateMode::kPartialSum
                            : dpform::privacy::ValidateMode::kAnalytic);
  const json doc = dpform::io::admissibility_to_json(report);
  const std::string path = (dir / "admissibility.json").string();
  dpform::io::write_text(path, doc.dump(2));
  std::cout << doc.dump() << std::endl;
  return 0;
}

int run_gains(const SimConfig& config) {
  const auto dir = prepare_out_dir(config);
  const int horizon = std::max(config.horizon, 1);
  const dpform::GainSchedule gains = dpform::GainSchedule::compute(
      config.scenario.graph, config.scenario.control,
      config.scenario.c_schedule, horizon);
  const std::string gains_path = (dir / "gains.csv").string();
  const std::string rho_path = (dir / "rho.csv").string();
  dpform::io::write_gains_csv(gains, gains_path);
  dpform::io::write_rho_csv(gains, config.scenario.c_schedule, rho_path);
  json summary;
  summary["gains_csv"] = gains_path;
  summary["rho_csv"] = rho_path;
  summary["rho_global"] = gains.rho_max(0, horizon - 1);
  std::cout << summary.dump() << std::endl;
  return 0;
}

void print_error(const std::string& type, const std::string& message) {
  json doc;
  doc["error"]["type"] = type;
  doc["error"]["message"] = message;
  std::cerr << doc.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving distributed formation control simulator"};
  app.require_subcommand(1);

  CommonArgs common;
  std::vector<std::string> figures;
  bool serial = false;
  int from = 0;
  int to = -1;
  std::string mode = "analytic";

  auto* simulate = app.add_subcommand(
      "simulate", "run one closed-loop trajectory and export CSVs");
  add_common(simulate, common);
  simulate->add_option("--figures", figures,
                       "plot-ready CSVs to export (fig1a, fig1b, fig2)")
      ->delimiter(',');

  auto* monte = app.add_subcommand(
      "monte-carlo", "aggregate convergence statistics over parallel runs");
  add_common(monte, common);
  monte->add_flag("--serial", serial,
                  "use the serial reference implementation");

  auto* audit = app.add_subcommand(
      "privacy-audit", "compose the (eps, delta) budget over a window");
  add_common(audit, common);
  audit->add_option("--from", from, "window start (default 0)");
  audit->add_option("--to", to, "window end (default: config horizon)");

  auto* validate = app.add_subcommand(
      "validate-schedule", "check the schedules for admissibility");
  add_common(validate, common);
  validate->add_option("--mode", mode, "analytic or partial-sum")
      ->check(CLI::IsMember({"analytic", "partial-sum"}));

  auto* gains =
      app.add_subcommand("gains", "export the LQ gain table and its bounds");
  add_common(gains, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("CliParseError", e.what());
    return 2;
  }

  SimConfig config;
  try {
    config = load_with_overrides(common);
  } catch (const dpform::Error& e) {
    print_error(e.name(), e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("Error", e.what());
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(config, figures);
    if (monte->parsed()) return run_monte_carlo(config, serial);
    if (audit->parsed()) {
      if (to < 0) to = config.horizon;
      return run_privacy_audit(config, from, to);
    }
    if (validate->parsed()) return run_validate(config, mode);
    if (gains->parsed()) return run_gains(config);
  } catch (const dpform::Error& e) {
    print_error(e.name(), e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error("Error", e.what());
    return 3;
  }
  print_error("CliParseError", "no subcommand given");
  return 2;
}
