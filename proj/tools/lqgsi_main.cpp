/*
 Copyright 2026 The lqgsi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
// lqgsi command-line front end.
//
// Exit codes: 0 success, 1 error (bad input, solver failure), 2 budget below
// the full-information cost, 3 simulated closed loop diverged.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "lqgsi/error.hpp"
#include "lqgsi/io.hpp"
#include "lqgsi/model.hpp"
#include "lqgsi/reference_systems.hpp"
#include "lqgsi/sdp.hpp"
#include "lqgsi/sim.hpp"
#include "lqgsi/synthesis.hpp"
#include "lqgsi/tradeoff.hpp"

namespace {

using namespace lqgsi;

enum ExitCode { kOk = 0, kError = 1, kInfeasible = 2, kDiverged = 3 };

struct SolverFlags {
  double tol = 1e-9;
  int max_newton = 2000;
  double mu_factor = 10.0;

  SolveOptions options() const {
    SolveOptions o;
    o.barrier.tol = tol;
    o.barrier.max_newton = max_newton;
    o.barrier.mu_factor = mu_factor;
    return o;
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--tol", f.tol, "Barrier stopping tolerance on the duality gap bound")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-newton", f.max_newton, "Newton step limit across all centerings")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mu-factor", f.mu_factor, "Barrier parameter growth per centering")
      ->check(CLI::Range(1.0001, 1e6));
}

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

void print_summary(std::ostream& os, const SdpSolution& sol, const Policy& policy,
                   const SystemModel& model) {
  const bool stationary = model.horizon.is_infinite();
  os << "status          " << to_string(sol.status) << "\n";
  os << "rate            " << fmt(policy.rate_bits()) << " bits (" << fmt(policy.rate_nats)
     << " nats)" << (stationary ? " per step" : " over the horizon") << "\n";
  os << "predicted cost  " << fmt(policy.predicted_cost) << " (budget " << fmt(policy.gamma)
     << ")\n";
  os << "gamma_min       " << fmt(sol.bounds.gamma_min) << "\n";
  os << "gamma_nocomm    " << fmt(sol.bounds.gamma_nocomm) << "\n";
  if (stationary) {
    os << "encoder dim q   " << policy.steps.front().encoder.q() << "\n";
    os << "filter radius   " << fmt(policy.closed_loop_radius) << "\n";
  } else {
    os << "encoder dims q  ";
    for (const auto& s : policy.steps) os << s.encoder.q() << ' ';
    os << "\n";
  }
  if (sol.status == SolveStatus::Optimal) {
    os << "newton steps    " << sol.newton_iterations << " (" << sol.outer_iterations
       << " centerings, gap bound " << fmt(sol.kkt.gap_bound, 3) << ")\n";
  }
}

int cmd_solve(const std::string& config_path, const std::string& out, const SolverFlags& flags) {
  const io::ProblemConfig cfg = io::load_config(config_path);
  const SdpSolution sol = solve(cfg.model, cfg.cost, flags.options());
  if (sol.status == SolveStatus::InfeasibleBudget) {
    std::cerr << "infeasible budget: gamma = " << fmt(cfg.cost.gamma)
              << " is not above gamma_min = " << fmt(sol.bounds.gamma_min)
              << " (cost with exact state knowledge)\n";
    return kInfeasible;
  }
  if (sol.status == SolveStatus::MaxIter) {
    std::cerr << "solver stopped after " << sol.newton_iterations
              << " Newton steps without converging (gap bound " << fmt(sol.kkt.gap_bound, 3)
              << ", decrement " << fmt(sol.kkt.newton_decrement, 3)
              << "); raise --max-newton or loosen --tol\n";
    return kError;
  }
  const Policy policy = assemble(cfg.model, cfg.cost, sol);
  io::write_json(out, io::policy_to_json(policy, cfg.model));
  print_summary(std::cout, sol, policy, cfg.model);
  std::cout << "policy written  " << out << "\n";
  return kOk;
}

int cmd_tradeoff(const std::string& config_path, const std::string& out, const SolverFlags& flags,
                 int jobs) {
  const io::ProblemConfig cfg = io::load_config(config_path);
  if (!cfg.model.horizon.is_infinite()) {
    throw InvalidModel(config_path + ": tradeoff needs an infinite-horizon config");
  }
  if (cfg.gamma_sweep.empty()) {
    throw InvalidModel(config_path + ": field 'gamma_sweep': missing or empty");
  }
  const auto points = sweep(cfg.model, cfg.cost, cfg.gamma_sweep, flags.options(), jobs);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error(out + ": cannot open for writing");
  write_tradeoff_csv(os, points);
  int failed = 0;
  for (const auto& p : points) failed += p.error.empty() ? 0 : 1;
  std::cout << "wrote " << points.size() << " points to " << out;
  if (failed > 0) std::cout << " (" << failed << " failed)";
  std::cout << "\n";
  return kOk;
}

int cmd_simulate(const std::string& policy_path, const std::string& out, SimConfig sim,
                 const std::string& trajectory) {
  const io::LoadedPolicy lp = io::load_policy(policy_path);
  std::ofstream traj;
  if (!trajectory.empty()) {
    traj.open(trajectory, std::ios::binary);
    if (!traj) throw Error(trajectory + ": cannot open for writing");
    sim.trajectory = &traj;
  }
  if (!lp.policy.stationary) {
    sim.steps = static_cast<long>(lp.policy.steps.size());
    sim.burn_in = 0;
  }
  try {
    const SimReport rep = simulate(lp.model, lp.policy, sim);
    io::write_json(out, io::sim_report_to_json(rep));
    std::cout << "empirical cost  " << fmt(rep.avg_cost) << " +- " << fmt(rep.cost_stderr, 3)
              << " (predicted " << fmt(rep.predicted_cost) << ")\n";
    if (rep.q == 0) std::cout << "encoder silent (q = 0)\n";
    std::cout << "report written  " << out << "\n";
  } catch (const Divergence& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kDiverged;
  }
  return kOk;
}

struct Curve {
  std::string name;
  SystemModel model;
};

int cmd_reproduce(const std::string& figure, const std::string& out_dir, double lo, double hi,
                  double step, const SolverFlags& flags, int jobs) {
  std::vector<Curve> curves;
  if (figure == "fig2") {
    for (const auto& [label, rho] :
         std::vector<std::pair<std::string, double>>{{"0", 0.0}, {"0.1", 0.1}, {"1", 1.0},
                                                     {"10", 10.0}}) {
      curves.push_back({"fig2_rho" + label, reference::snr_model(rho)});
    }
  } else if (figure == "fig3") {
    for (int r = 0; r <= 4; ++r) {
      curves.push_back({"fig3_r" + std::to_string(r),
                        reference::observation_model(reference::partial_C(r))});
    }
    curves.push_back({"fig3_cprime", reference::observation_model(reference::blind_C())});
  } else {
    throw InvalidModel("unknown figure '" + figure + "' (expected fig2 or fig3)");
  }
  std::filesystem::create_directories(out_dir);
  const std::vector<double> gammas = gamma_grid(lo, hi, step);
  for (const auto& c : curves) {
    const auto points = sweep(c.model, reference::unit_cost(lo), gammas, flags.options(), jobs);
    const std::string path = (std::filesystem::path(out_dir) / (c.name + ".csv")).string();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(path + ": cannot open for writing");
    write_tradeoff_csv(os, points);
    std::cout << "wrote " << path << "\n";
  }
  return kOk;
}

int cmd_spectral(const std::string& config_path, const std::string& out) {
  const io::ProblemConfig cfg = io::load_config(config_path);
  const SpectralReport rep = spectral_report(cfg.model, cfg.cost.Q.front());
  const io::json j = io::spectral_to_json(rep);
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    io::write_json(out, j);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal conditional directed information for LQG control with side information"};
  app.require_subcommand(1);

  SolverFlags flags;
  std::string config;
  std::string solve_out = "policy.json";
  std::string trade_out = "tradeoff.csv";
  std::string sim_out = "sim_report.json";
  std::string repro_out = "curves";
  std::string spec_out;
  int jobs = 1;

  auto* solve_cmd = app.add_subcommand("solve", "Solve one budget and write the optimal policy");
  solve_cmd->add_option("--config", config, "Problem config (JSON)")->required();
  solve_cmd->add_option("--out", solve_out, "Policy output path")->capture_default_str();
  add_solver_flags(solve_cmd, flags);

  auto* trade_cmd = app.add_subcommand("tradeoff", "Sweep the budgets listed in gamma_sweep");
  trade_cmd->add_option("--config", config, "Problem config with gamma_sweep")->required();
  trade_cmd->add_option("--out", trade_out, "CSV output path")->capture_default_str();
  trade_cmd->add_option("--jobs", jobs, "Budgets solved in parallel")->check(CLI::PositiveNumber);
  add_solver_flags(trade_cmd, flags);

  SimConfig sim;
  std::string trajectory;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of a policy file");
  sim_cmd->add_option("--config,--policy", config, "Policy file written by solve")->required();
  sim_cmd->add_option("--out", sim_out, "Report output path")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_option("--steps", sim.steps, "Total simulated steps")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--burn-in", sim.burn_in, "Steps discarded per batch");
  sim_cmd->add_option("--batches", sim.batches, "Independent batches")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--jobs", sim.threads, "Worker threads")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--trajectory", trajectory, "Write batch 0 trajectory CSV here");

  std::string figure = "fig2";
  double gamma_lo = 30.0;
  double gamma_hi = 90.0;
  double gamma_step = 1.0;
  auto* repro_cmd =
      app.add_subcommand("reproduce-paper", "Trade-off curves of the four-state benchmark plant");
  repro_cmd->add_option("--figure", figure, "fig2 (side-information SNR) or fig3 (partial C)")
      ->check(CLI::IsMember({"fig2", "fig3"}));
  repro_cmd->add_option("--out", repro_out, "Output directory")->capture_default_str();
  repro_cmd->add_option("--gamma-min", gamma_lo, "First budget");
  repro_cmd->add_option("--gamma-max", gamma_hi, "Last budget");
  repro_cmd->add_option("--gamma-step", gamma_step, "Budget spacing")->check(CLI::PositiveNumber);
  repro_cmd->add_option("--jobs", jobs, "Budgets solved in parallel")->check(CLI::PositiveNumber);
  add_solver_flags(repro_cmd, flags);

  auto* spec_cmd = app.add_subcommand("spectral", "Eigenvalues and stabilization rate of A");
  spec_cmd->add_option("--config", config, "Problem config (infinite horizon)")->required();
  spec_cmd->add_option("--out", spec_out, "JSON output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return cmd_solve(config, solve_out, flags);
    if (*trade_cmd) return cmd_tradeoff(config, trade_out, flags, jobs);
    if (*sim_cmd) return cmd_simulate(config, sim_out, sim, trajectory);
    if (*repro_cmd) return cmd_reproduce(figure, repro_out, gamma_lo, gamma_hi, gamma_step, flags, jobs);
    if (*spec_cmd) return cmd_spectral(config, spec_out);
  } catch (const InfeasibleBudget& e) {
    std::cerr << "infeasible budget: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Divergence& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
