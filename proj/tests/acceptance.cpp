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

// Acceptance suite: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. Criteria that specify CLI behaviour
// spawn the real binary; the rest drive the library directly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpform/config.hpp"
#include "dpform/engine.hpp"
#include "dpform/errors.hpp"
#include "dpform/graph.hpp"
#include "dpform/privacy.hpp"
#include "support/batch_qp.hpp"
#include "support/gauss_tail_oracle.hpp"
#include "support/prufer.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
  std::string cli;
  std::string preset;
  fs::path workdir;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

int run_cli(const Context& ctx, const std::string& args,
            const std::string& tag, const std::string& env = "") {
  const std::string prefix = env.empty() ? "" : env + " ";
  const std::string log = (ctx.workdir / tag).string();
  const std::string command = prefix + ctx.cli + " " + args + " >" + log +
                              ".out 2>" + log + ".err";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing artifact " + path.string());
  return json::parse(in);
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

// --- criterion 1: delta composition against the 50-digit oracle ---------
Outcome criterion1(const Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const std::string out = (ctx.workdir / "c1").string();
  if (run_cli(ctx, "privacy-audit --config " + ctx.preset +
                       " --from 0 --to 100 --out " + out,
              "c1") != 0) {
    return {false, "privacy-audit exited nonzero"};
  }
  const double elapsed = seconds_since(start);
  const json ledger = read_json(fs::path(out) / "privacy_ledger.json");
  const double from0 = ledger.at("delta_total").get<double>();
  const double from1 = ledger.at("delta_total_from1").get<double>();
  // 50-digit reference sums of 0.001 e^{-sqrt t}:
  //   t = 1..100: 0.0016694305303205540530409833705862...
  //   t = 0..100: 0.0026694305303205540530409833705862...
  const double oracle_from1 = 0.0016694305303205541;
  const double oracle_from0 = 0.0026694305303205541;
  const bool in_bands = from1 >= 0.00160 && from1 <= 0.00175 &&
                        from0 >= 0.00260 && from0 <= 0.00275;
  const bool matches_oracle =
      std::abs(from1 - oracle_from1) <= 1e-12 * oracle_from1 &&
      std::abs(from0 - oracle_from0) <= 1e-12 * oracle_from0;
  const bool fast = elapsed < 1.0;
  return {in_bands && matches_oracle && fast,
          "delta[1,100]=" + fmt(from1) + " delta[0,100]=" + fmt(from0) +
              " elapsed=" + fmt(elapsed) + "s"};
}

// --- criterion 2: eps composition against the reported target -----------
Outcome criterion2(const Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const std::string out = (ctx.workdir / "c2").string();
  if (run_cli(ctx, "privacy-audit --config " + ctx.preset +
                       " --from 0 --to 100 --out " + out,
              "c2") != 0) {
    return {false, "privacy-audit exited nonzero"};
  }
  const double elapsed = seconds_since(start);
  const json ledger = read_json(fs::path(out) / "privacy_ledger.json");
  const double eps = ledger.at("eps_total").get<double>();
  const double target = 29.9587;
  const bool finite = std::isfinite(eps) && eps > 0.0;
  const bool within = std::abs(eps - target) <= 0.25 * target;
  const bool fast = elapsed < 5.0;
  return {finite && within && fast,
          "eps_total=" + fmt(eps) + " target=" + fmt(target) +
              " (+-25%) elapsed=" + fmt(elapsed) + "s"};
}

// --- criterion 3: formation convergence ---------------------------------
Outcome criterion3(const Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const std::string out = (ctx.workdir / "c3").string();
  if (run_cli(ctx, "simulate --config " + ctx.preset + " --horizon 100 --out " +
                       out,
              "c3_sim") != 0) {
    return {false, "simulate exited nonzero"};
  }
  // Final edge errors straight from the exported CSV (t,edge,dim,xi).
  Eigen::VectorXd final_xi = Eigen::VectorXd::Zero(4);
  {
    std::ifstream in(fs::path(out) / "edge_errors.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      int t = 0, edge = 0, dim = 0;
      double xi = 0.0;
      if (std::sscanf(line.c_str(), "%d,%d,%d,%lf", &t, &edge, &dim, &xi) ==
              4 &&
          t == 100) {
        final_xi((edge - 1) * 2 + (dim - 1)) = xi;
      }
    }
  }
  const double edge1 = final_xi.segment(0, 2).norm();
  const double edge2 = final_xi.segment(2, 2).norm();

  if (run_cli(ctx, "monte-carlo --config " + ctx.preset +
                       " --runs 200 --horizon 100 --out " + out,
              "c3_mc") != 0) {
    return {false, "monte-carlo exited nonzero"};
  }
  const json stats = read_json(fs::path(out) / "mc_stats.json");
  const std::vector<double> mean_sq = stats.at("mean_sq");
  const double elapsed = seconds_since(start);
  const bool bands = edge1 <= 2.0 && edge2 <= 2.0;
  const bool collapsed = mean_sq.at(100) <= 0.05 * mean_sq.at(0);
  const bool fast = elapsed < 30.0;
  return {bands && collapsed && fast,
          "|xi_e(100)|=" + fmt(edge1) + "," + fmt(edge2) +
              " mean_sq(100)/mean_sq(0)=" + fmt(mean_sq.at(100) /
                                                mean_sq.at(0)) +
              " elapsed=" + fmt(elapsed) + "s"};
}

// --- criterion 4: mean-square boundedness and tail increments ------------
Outcome criterion4(const Context& ctx) {
  const dpform::SimConfig config = dpform::load_config(ctx.preset);
  const dpform::GainSchedule gains = dpform::GainSchedule::compute(
      config.scenario.graph, config.scenario.control,
      config.scenario.c_schedule, 101);
  const dpform::MCStats stats = dpform::monte_carlo(
      config.scenario, gains, 200, 100, config.seed, dpform::Exec::kOpenMP);
  double max_mean_sq = 0.0;
  for (double v : stats.mean_sq) max_mean_sq = std::max(max_mean_sq, v);
  const bool bounded = max_mean_sq <= 1.05 * stats.mean_sq.front();

  int quiet_tails = 0;
  const double xi0_norm = std::sqrt(stats.mean_sq.front());
  for (int r = 0; r < 200; ++r) {
    const dpform::TrajectoryLog log =
        dpform::run(config.scenario, gains, config.seed, 101,
                    static_cast<std::uint32_t>(r));
    double max_increment = 0.0;
    for (int t = 90; t <= 100; ++t) {
      max_increment =
          std::max(max_increment, (log.xi[t + 1] - log.xi[t]).norm());
    }
    if (max_increment < 0.1 * xi0_norm) ++quiet_tails;
  }
  const bool tails_ok = quiet_tails >= 190;
  return {bounded && tails_ok,
          "max mean_sq ratio=" + fmt(max_mean_sq / stats.mean_sq.front()) +
              " quiet tails=" + std::to_string(quiet_tails) + "/200"};
}

// --- criterion 5: zero-mean limit for l2-minus-l1 gains ------------------
Outcome criterion5(const Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  dpform::SimConfig config = dpform::load_config(ctx.preset);
  config.scenario.c_schedule = dpform::Schedule::power(1.0 / 7.0, 0.9);
  const dpform::GainSchedule gains = dpform::GainSchedule::compute(
      config.scenario.graph, config.scenario.control,
      config.scenario.c_schedule, 2000);
  const dpform::MCStats stats =
      dpform::monte_carlo(config.scenario, gains, 500, 2000, config.seed,
                          dpform::Exec::kOpenMP);
  bool centered = true;
  std::ostringstream detail;
  for (int k = 0; k < stats.mean_xi_final.size(); ++k) {
    const double se = std::sqrt(stats.var_xi_final(k) / stats.runs);
    if (std::abs(stats.mean_xi_final(k)) > 3.0 * se) centered = false;
    detail << (k ? "," : "") << fmt(stats.mean_xi_final(k) / se);
  }
  const double elapsed = seconds_since(start);
  const bool fast = elapsed < 300.0;
  return {centered && fast, "mean/se per component=[" + detail.str() +
                                "] elapsed=" + fmt(elapsed) + "s"};
}

// --- criterion 6: gain recursion vs stacked QP oracle --------------------
Outcome criterion6(const Context&) {
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd k2 =
      dpform::lqr_gain(8.0 * identity, 3.0 * identity, 1.0 / 7.0, 1, 2);
  const double closed_form = 8.0 / (3.0 + 8.0 / 7.0);
  if ((k2 - closed_form * identity).cwiseAbs().maxCoeff() > 1e-12) {
    return {false, "T=2 closed form mismatch"};
  }

  std::mt19937 rng(20240615);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_int_distribution<int> horizon(2, 12);
  std::uniform_int_distribution<int> degree_dist(1, 3);
  std::uniform_real_distribution<double> c_dist(0.005, 1.0);
  std::normal_distribution<double> normal(0.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = dim(rng);
    const int T = horizon(rng);
    const int degree = degree_dist(rng);
    const double c = c_dist(rng);
    Eigen::MatrixXd m(n, n), w(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m(i, j) = normal(rng);
        w(i, j) = normal(rng);
      }
    }
    const Eigen::MatrixXd q =
        m * m.transpose() + 0.05 * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd r =
        w * w.transpose() + 0.05 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd x0(n), mean(n);
    for (int i = 0; i < n; ++i) {
      x0(i) = normal(rng);
      mean(i) = normal(rng);
    }
    const Eigen::MatrixXd k = dpform::lqr_gain(q, r, c, degree, T);
    const Eigen::VectorXd u_gain = c * k * degree * (mean - x0);
    const Eigen::VectorXd u_qp =
        dpform::testing::batch_qp_oracle(q, r, c, degree, T, x0, mean);
    worst = std::max(worst,
                     (u_gain - u_qp).norm() / (1.0 + u_qp.norm()));
  }
  return {worst <= 1e-9, "worst relative deviation=" + fmt(worst)};
}

// --- criterion 7: tail function accuracy ---------------------------------
Outcome criterion7(const Context&) {
  double worst = 0.0;
  for (double p : {0.4, 0.1, 0.01, 0.001, 1e-6}) {
    const double x = dpform::privacy::q_tail_inv(p);
    worst = std::max(worst, std::abs(dpform::privacy::q_tail(x) - p) / p);
  }
  const bool round_trip = worst <= 1e-10;
  const double q_ref = dpform::privacy::q_tail(3.0902323);
  const bool anchor = std::abs(q_ref - 0.001) <= 1e-7;
  const double oracle = static_cast<double>(
      dpform::testing::q_tail_oracle(3.0902323L));
  const bool oracle_match = std::abs(q_ref - oracle) <= 1e-12;
  return {round_trip && anchor && oracle_match,
          "worst round-trip=" + fmt(worst) +
              " Q(3.0902323)=" + fmt(q_ref)};
}

// --- criterion 8: gaussian mechanism round trip --------------------------
Outcome criterion8(const Context&) {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> sens(1e-5, 20.0);
  std::uniform_real_distribution<double> eps_dist(1e-4, 8.0);
  std::uniform_real_distribution<double> log_delta(-20.0, -0.75);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double delta2 = sens(rng);
    const double eps = eps_dist(rng);
    const double delta = std::exp(log_delta(rng));
    const double sigma =
        dpform::privacy::gaussian_sigma_for(delta2, eps, delta);
    const double back =
        dpform::privacy::step_epsilon(delta2, sigma * sigma, delta);
    worst = std::max(worst, std::abs(back - eps) / eps);
  }
  return {worst <= 1e-10, "worst relative error=" + fmt(worst)};
}

// --- criterion 9: structural invariants ----------------------------------
Outcome criterion9(const Context& ctx) {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> size(2, 12);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = size(rng);
    const dpform::Graph g =
        dpform::Graph::build(n, dpform::testing::random_tree(n, rng));
    if (dpform::incidence_rank(g) != n - 1) {
      return {false, "rank defect on a random tree with n=" +
                         std::to_string(n)};
    }
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    const dpform::Graph g =
        dpform::Graph::build(n, dpform::testing::random_tree(n, rng));
    std::vector<Eigen::MatrixXd> blocks;
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd m(2, 2);
      m << normal(rng), normal(rng), normal(rng), normal(rng);
      blocks.push_back(m * m.transpose() +
                       0.05 * Eigen::MatrixXd::Identity(2, 2));
    }
    const Eigen::MatrixXd psi = dpform::psi_matrix(g, blocks);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        0.5 * (psi + psi.transpose()));
    if (eig.eigenvalues().minCoeff() <= 0.0) {
      return {false, "Psi symmetric part not positive definite"};
    }
  }

  // Agent-level step vs stacked edge dynamics under the shared-edge hook.
  dpform::SimConfig config = dpform::load_config(ctx.preset);
  config.scenario.noise = dpform::NoiseMode::kSharedEdge;
  const dpform::GainSchedule gains = dpform::GainSchedule::compute(
      config.scenario.graph, config.scenario.control,
      config.scenario.c_schedule, 1);
  dpform::SimState state{0, config.scenario.x0};
  dpform::StepTrace trace;
  dpform::step(state, config.scenario, gains, 321, 0, &trace);
  const int dim = config.scenario.state_dim();
  Eigen::VectorXd eta(config.scenario.graph.n_edges() * dim);
  for (const auto& item : trace.receptions) {
    const auto& edge = config.scenario.graph.edges()[item.edge];
    if (item.receiver == edge.a) {
      eta.segment(item.edge * dim, dim) = item.noise;
    }
  }
  std::vector<Eigen::MatrixXd> blocks;
  for (int i = 0; i < config.scenario.graph.n_agents(); ++i) {
    blocks.push_back(gains.gain(i, 0));
  }
  const Eigen::MatrixXd psi = dpform::psi_matrix(config.scenario.graph,
                                                 blocks);
  const Eigen::VectorXd xi0 = dpform::edge_errors(
      config.scenario.x0, config.scenario.graph, config.scenario.formation);
  const Eigen::VectorXd expected =
      xi0 - config.scenario.c_schedule(0) * psi * (xi0 - eta);
  const Eigen::VectorXd actual = dpform::edge_errors(
      state.x, config.scenario.graph, config.scenario.formation);
  const double deviation =
      (actual - expected).norm() / std::max(1.0, expected.norm());
  if (deviation > 1e-12) {
    return {false, "stacked-dynamics hook deviates by " + fmt(deviation)};
  }
  return {true, "500 trees, 100 Psi draws, hook deviation=" +
                    fmt(deviation)};
}

// --- criterion 10: byte-identical artifacts ------------------------------
Outcome criterion10(const Context& ctx) {
  const std::string out_a = (ctx.workdir / "c10a").string();
  const std::string out_b = (ctx.workdir / "c10b").string();
  for (const auto& [tag, out] :
       {std::pair{std::string("c10_sim_a"), out_a},
        std::pair{std::string("c10_sim_b"), out_b}}) {
    if (run_cli(ctx, "simulate --config " + ctx.preset +
                         " --seed 7 --horizon 50 --out " + out,
                tag) != 0) {
      return {false, "simulate exited nonzero"};
    }
  }
  if (read_bytes(fs::path(out_a) / "trajectory.csv") !=
          read_bytes(fs::path(out_b) / "trajectory.csv") ||
      read_bytes(fs::path(out_a) / "edge_errors.csv") !=
          read_bytes(fs::path(out_b) / "edge_errors.csv")) {
    return {false, "simulate outputs differ between invocations"};
  }

  const std::string mc_args = "monte-carlo --config " + ctx.preset +
                              " --runs 64 --horizon 50 --seed 11 --out ";
  if (run_cli(ctx, mc_args + out_a, "c10_mc_1", "OMP_NUM_THREADS=1") != 0 ||
      run_cli(ctx, mc_args + out_b, "c10_mc_4", "OMP_NUM_THREADS=4") != 0) {
    return {false, "monte-carlo exited nonzero"};
  }
  const std::string threads1 = read_bytes(fs::path(out_a) / "mc_stats.json");
  const std::string threads4 = read_bytes(fs::path(out_b) / "mc_stats.json");
  if (threads1 != threads4) {
    return {false, "monte-carlo stats differ across thread counts"};
  }
  if (run_cli(ctx, mc_args + out_b + " --serial", "c10_mc_serial") != 0) {
    return {false, "serial monte-carlo exited nonzero"};
  }
  if (read_bytes(fs::path(out_b) / "mc_stats.json") != threads1) {
    return {false, "serial reference differs from the parallel kernel"};
  }
  return {true, "simulate CSVs and monte-carlo stats byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  int only = 0;
  for (int i = 1; i < argc - 1; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion") only = std::atoi(argv[i + 1]);
    if (arg == "--cli") ctx.cli = argv[i + 1];
    if (arg == "--preset") ctx.preset = argv[i + 1];
    if (arg == "--workdir") ctx.workdir = argv[i + 1];
  }
  if (ctx.cli.empty() || ctx.preset.empty()) {
    std::cerr << "usage: dpform_acceptance --cli PATH --preset PATH "
                 "--workdir DIR [--criterion N]\n";
    return 2;
  }
  if (ctx.workdir.empty()) ctx.workdir = "acceptance_work";
  fs::create_directories(ctx.workdir);

  using Criterion = std::function<Outcome(const Context&)>;
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"delta composition matches the 50-digit oracle", criterion1},
      {"eps composition lands within 25% of the reported 29.9587",
       criterion2},
      {"formation converges within the noise-floor band", criterion3},
      {"mean-square stays bounded with quiet tails", criterion4},
      {"l2-minus-l1 gains leave the limit zero-mean", criterion5},
      {"gain recursion agrees with the stacked QP oracle", criterion6},
      {"tail function round-trip accuracy", criterion7},
      {"gaussian mechanism round-trip identity", criterion8},
      {"structural invariants (rank, Psi, stacked dynamics)", criterion9},
      {"byte-identical artifacts across reruns and thread counts",
       criterion10},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (only != 0 && number != only) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion "
              << number << ": " << criteria[i].first << " | "
              << outcome.detail << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
