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
#include "lqgsi/sdp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lqgsi/error.hpp"

namespace lqgsi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// [I; C] for a p x n observation matrix.
Mat identity_over(const Mat& C) {
  const Eigen::Index n = C.cols();
  return linalg::vstack(Mat::Identity(n, n), C);
}

/// [I; 0] with `extra` zero rows.
Mat identity_over_zero(Eigen::Index n, Eigen::Index extra) {
  Mat E = Mat::Zero(n + extra, n);
  E.topLeftCorner(n, n).setIdentity();
  return E;
}

Mat bottom_block(Eigen::Index n, const Mat& X) {
  return linalg::block_diag(Mat::Zero(n, n), X);
}

Mat snr_y(const SystemModel& model, int t) { return snr_matrix(model.C_at(t), model.V_at(t)); }

/// -1/2 log det(I + G (A P A^T + W) G^T) with G^T G = snrY, or nothing when snrY = 0.
void add_side_info_term(sdp::MaxDetProblem& prob, int block, const Mat& A, const Mat& W,
                        const Mat& snrY) {
  const Mat G = linalg::psd_factor(snrY, 1e-14);
  if (G.rows() == 0) return;
  sdp::LogDetTerm term;
  term.weight = 0.5;
  term.expr.constant = G * W * G.transpose();
  term.expr.constant.diagonal().array() += 1.0;
  term.expr.terms.push_back({block, 1.0, G * A});
  prob.objective.push_back(std::move(term));
}

void add_logdet_block(sdp::MaxDetProblem& prob, int block, Eigen::Index n) {
  sdp::LogDetTerm term;
  term.weight = 0.5;
  term.expr.constant = Mat::Zero(n, n);
  term.expr.terms.push_back({block, 1.0, Mat::Identity(n, n)});
  prob.objective.push_back(std::move(term));
}

/// [P - Pi, P A^T; A P, A P A^T + W] >= 0.
sdp::AffineSym pi_lmi(int P_block, int Pi_block, const Mat& A, const Mat& W) {
  const Eigen::Index n = A.rows();
  sdp::AffineSym lmi;
  lmi.constant = bottom_block(n, W);
  lmi.terms.push_back({P_block, 1.0, linalg::vstack(Mat::Identity(n, n), A)});
  lmi.terms.push_back({Pi_block, -1.0, identity_over_zero(n, n)});
  return lmi;
}

/// [X - P, X C^T; C X, C X C^T + V] >= 0 with X = A P_prev A^T + W (or the given
/// prior when prev_block < 0).
sdp::AffineSym omega_lmi(int P_block, int prev_block, const Mat& A_prev, const Mat& prior,
                         const Mat& C, const Mat& V) {
  const Eigen::Index n = C.cols();
  const Mat E = identity_over(C);
  sdp::AffineSym lmi;
  lmi.constant = E * prior * E.transpose() + bottom_block(n, V);
  if (prev_block >= 0) lmi.terms.push_back({prev_block, 1.0, E * A_prev});
  lmi.terms.push_back({P_block, -1.0, identity_over_zero(n, C.rows())});
  lmi.constant = linalg::symmetrize(lmi.constant);
  return lmi;
}

Mat optimal_pi(const Mat& P, const Mat& A, const Mat& W) {
  const Mat info = linalg::inverse_pd(P) + A.transpose() * linalg::inverse_pd(W) * A;
  return linalg::inverse_pd(linalg::symmetrize(info));
}

void require_pd_noise(const SystemModel& model, int steps) {
  for (int t = 0; t < steps; ++t) {
    if (!linalg::is_pd(model.W_at(t))) {
      throw InvalidModel("rate program requires W positive definite (step " +
                         std::to_string(t) + ")");
    }
  }
}

/// Stationary covariance after the free observation only; nullopt when the
/// y-only filter has no stationary regime.
std::optional<Mat> stationary_nocomm(const SystemModel& model) {
  const Mat snr = snr_y(model, 0);
  const auto X = stationary_prior_covariance(model.A_at(0), model.W_at(0), snr);
  if (!X) return std::nullopt;
  return incorporate(*X, snr);
}

std::optional<Mat> stationary_with_encoder(const SystemModel& model, const Mat& snrF) {
  const Mat snr = snr_y(model, 0) + snrF;
  const auto X = stationary_prior_covariance(model.A_at(0), model.W_at(0), snr);
  if (!X) return std::nullopt;
  return incorporate(*X, snr);
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::ZeroRate:
      return "zero_rate";
    case SolveStatus::InfeasibleBudget:
      return "infeasible_budget";
    case SolveStatus::MaxIter:
      return "max_iter";
  }
  return "unknown";
}

double SdpSolution::rate_bits() const { return objective_nats / std::numbers::ln2; }

Program build_finite(const SystemModel& model, const CostModel& cost, const GainSchedule& gains) {
  const int T = gains.horizon();
  const int n = model.n();
  if (T < 1) throw InvalidModel("build_finite: empty gain schedule");
  if (!linalg::is_pd(model.P_init)) {
    throw InvalidModel("finite-horizon rate program requires P_init positive definite");
  }
  require_pd_noise(model, T);

  Program prog;
  prog.n = n;
  auto& prob = prog.problem;
  prob.block_dims.assign(static_cast<std::size_t>(2 * T - 1), n);
  for (int t = 0; t < T; ++t) {
    prog.P_blocks.push_back(t);
    prog.Pi_blocks.push_back(t + 1 < T ? T + t : t);
  }

  const Mat prior_info = linalg::inverse_pd(model.P_init) + snr_y(model, 0);
  prob.constant = -0.5 * linalg::logdet_floored(linalg::symmetrize(prior_info));
  for (int t = 0; t + 1 < T; ++t) prob.constant += 0.5 * linalg::logdet_floored(model.W_at(t));

  for (int t = 0; t + 1 < T; ++t) {
    add_side_info_term(prob, prog.P_blocks[t], model.A_at(t), model.W_at(t), snr_y(model, t + 1));
  }
  for (int t = 0; t < T; ++t) add_logdet_block(prob, prog.Pi_blocks[t], n);

  for (int t = 0; t + 1 < T; ++t) {
    prob.lmis.push_back(pi_lmi(prog.P_blocks[t], prog.Pi_blocks[t], model.A_at(t), model.W_at(t)));
  }
  for (int t = 0; t < T; ++t) {
    if (t == 0) {
      prob.lmis.push_back(
          omega_lmi(prog.P_blocks[0], -1, Mat(), model.P_init, model.C_at(0), model.V_at(0)));
    } else {
      prob.lmis.push_back(omega_lmi(prog.P_blocks[t], prog.P_blocks[t - 1], model.A_at(t - 1),
                                    model.W_at(t - 1), model.C_at(t), model.V_at(t)));
    }
  }

  prob.budget.bound = cost.gamma;
  prob.budget.constant = (gains.Phi1 * model.P_init).trace();
  for (int t = 0; t < T; ++t) {
    prob.budget.weights.emplace_back(prog.P_blocks[t], gains.Theta[static_cast<std::size_t>(t)]);
    prob.budget.constant += (gains.S[static_cast<std::size_t>(t)] * model.W_at(t)).trace();
  }
  return prog;
}

Program build_infinite(const SystemModel& model, const CostModel& cost,
                       const StationaryGains& gains) {
  const int n = model.n();
  require_pd_noise(model, 1);
  const Mat& A = model.A_at(0);
  const Mat& W = model.W_at(0);

  Program prog;
  prog.infinite = true;
  prog.n = n;
  prog.P_blocks = {0};
  prog.Pi_blocks = {1};
  auto& prob = prog.problem;
  prob.block_dims = {n, n};
  prob.constant = 0.5 * linalg::logdet_floored(W);
  add_side_info_term(prob, 0, A, W, snr_y(model, 0));
  add_logdet_block(prob, 1, n);
  prob.lmis.push_back(pi_lmi(0, 1, A, W));
  prob.lmis.push_back(omega_lmi(0, 0, A, W, model.C_at(0), model.V_at(0)));
  prob.budget.bound = cost.gamma;
  prob.budget.constant = (W * gains.S).trace();
  prob.budget.weights.emplace_back(0, gains.Theta);
  return prog;
}

CostBounds cost_bounds(const SystemModel& model, const CostModel&, const GainSchedule& gains) {
  const int T = gains.horizon();
  CostBounds b;
  b.gamma_min = (gains.Phi1 * model.P_init).trace();
  for (int t = 0; t < T; ++t) {
    b.gamma_min += (gains.S[static_cast<std::size_t>(t)] * model.W_at(t)).trace();
  }
  const Mat zero = Mat::Zero(model.n(), model.n());
  const CovarianceSchedule nc = propagate(model, std::span<const Mat>(&zero, 1), T);
  b.gamma_nocomm = b.gamma_min;
  for (int t = 0; t < T; ++t) {
    b.gamma_nocomm += (gains.Theta[static_cast<std::size_t>(t)] * nc.P_post[static_cast<std::size_t>(t)]).trace();
  }
  return b;
}

CostBounds cost_bounds(const SystemModel& model, const CostModel&,
                       const StationaryGains& gains) {
  CostBounds b;
  b.gamma_min = (model.W_at(0) * gains.S).trace();
  const auto Py = stationary_nocomm(model);
  b.gamma_nocomm = Py ? b.gamma_min + (gains.Theta * *Py).trace() : kInf;
  return b;
}

std::vector<Mat> start_point(const Program& program, const SystemModel& model,
                             const CostModel& cost, double margin) {
  const int n = program.n;
  const int T = static_cast<int>(program.P_blocks.size());
  const Mat zero = Mat::Zero(n, n);

  double snr_scale = 0.0;
  for (int t = 0; t < T; ++t) snr_scale = std::max(snr_scale, linalg::sym_norm(snr_y(model, t)));

  std::vector<Mat> nocomm;
  if (program.infinite) {
    if (auto P = stationary_nocomm(model)) nocomm.push_back(std::move(*P));
  } else {
    nocomm = propagate(model, std::span<const Mat>(&zero, 1), T).P_post;
  }

  const auto& prob = program.problem;
  double sigma = 1e3 * snr_scale + 1.0;
  for (int attempt = 0; attempt < 14; ++attempt, sigma *= 10.0) {
    const Mat snrF = sigma * Mat::Identity(n, n);
    std::vector<Mat> full;
    if (program.infinite) {
      auto P = stationary_with_encoder(model, snrF);
      if (!P) continue;
      full.push_back(std::move(*P));
    } else {
      full = propagate(model, std::span<const Mat>(&snrF, 1), T).P_post;
    }

    double alpha = nocomm.empty() ? 1.0 : 0.5;
    for (int k = 0; k < 60; ++k, alpha = 0.5 * (alpha + 1.0)) {
      std::vector<Mat> blocks(prob.block_dims.size());
      double p_floor = 1.0;
      bool ok = true;
      for (int t = 0; t < T && ok; ++t) {
        const auto idx = static_cast<std::size_t>(t);
        Mat P = nocomm.empty() ? full[idx] : (1.0 - alpha) * nocomm[idx] + alpha * full[idx];
        P = linalg::symmetrize(P);
        p_floor = std::min(p_floor, linalg::min_eigenvalue(P));
        if (!linalg::is_pd(P)) {
          ok = false;
          break;
        }
        blocks[static_cast<std::size_t>(program.P_blocks[idx])] = P;
      }
      if (!ok) break;
      for (int t = 0; t < T; ++t) {
        const auto idx = static_cast<std::size_t>(t);
        if (program.Pi_blocks[idx] == program.P_blocks[idx]) continue;
        const Mat& P = blocks[static_cast<std::size_t>(program.P_blocks[idx])];
        blocks[static_cast<std::size_t>(program.Pi_blocks[idx])] =
            0.999 * optimal_pi(P, model.A_at(t), model.W_at(t));
      }
      const double slack = prob.budget.bound - prob.budget.evaluate(blocks);
      const double lmi_floor = margin * std::max(p_floor, 1e-300);
      if (slack > margin && prob.min_lmi_eigenvalue(blocks) > lmi_floor &&
          std::isfinite(prob.objective_value(blocks))) {
        return blocks;
      }
      if (nocomm.empty()) break;
    }
  }
  std::ostringstream msg;
  msg << "no strictly feasible start point found for gamma = " << cost.gamma;
  throw NumericalError(msg.str());
}

SdpSolution solve(const SystemModel& model, const CostModel& cost, const SolveOptions& opts) {
  require_valid(model, cost);
  require_pd_noise(model, model.horizon.is_infinite() ? 1 : model.horizon.steps());
  SdpSolution sol;
  Program prog;
  if (model.horizon.is_infinite()) {
    if (!model.time_invariant()) {
      throw UnsupportedOperation("infinite-horizon programs need time-invariant matrices");
    }
    const StationaryGains gains = solve_dare(model, cost);
    sol.bounds = cost_bounds(model, cost, gains);
    if (cost.gamma <= sol.bounds.gamma_min) {
      sol.status = SolveStatus::InfeasibleBudget;
      return sol;
    }
    if (sol.bounds.gamma_nocomm <= cost.gamma) {
      sol.status = SolveStatus::ZeroRate;
      sol.P = {*stationary_nocomm(model)};
      sol.Pi = {optimal_pi(sol.P[0], model.A_at(0), model.W_at(0))};
      sol.predicted_cost = sol.bounds.gamma_nocomm;
      return sol;
    }
    prog = build_infinite(model, cost, gains);
  } else {
    const GainSchedule gains = backward_riccati(model, cost);
    sol.bounds = cost_bounds(model, cost, gains);
    if (cost.gamma <= sol.bounds.gamma_min) {
      sol.status = SolveStatus::InfeasibleBudget;
      return sol;
    }
    if (sol.bounds.gamma_nocomm <= cost.gamma) {
      const Mat zero = Mat::Zero(model.n(), model.n());
      sol.status = SolveStatus::ZeroRate;
      sol.P = propagate(model, std::span<const Mat>(&zero, 1), gains.horizon()).P_post;
      for (int t = 0; t < gains.horizon(); ++t) {
        const Mat& P = sol.P[static_cast<std::size_t>(t)];
        sol.Pi.push_back(t + 1 < gains.horizon() ? optimal_pi(P, model.A_at(t), model.W_at(t))
                                                 : P);
      }
      sol.predicted_cost = sol.bounds.gamma_nocomm;
      return sol;
    }
    prog = build_finite(model, cost, gains);
  }

  const std::vector<Mat> start = start_point(prog, model, cost, opts.start_margin);
  const sdp::BarrierResult res = sdp::minimize(prog.problem, start, opts.barrier);
  sol.status = res.converged ? SolveStatus::Optimal : SolveStatus::MaxIter;
  sol.objective_nats = res.objective;
  sol.kkt = res.kkt;
  sol.newton_iterations = res.newton_iterations;
  sol.outer_iterations = res.outer_iterations;
  sol.predicted_cost = prog.problem.budget.evaluate(res.blocks);
  for (std::size_t t = 0; t < prog.P_blocks.size(); ++t) {
    sol.P.push_back(res.blocks[static_cast<std::size_t>(prog.P_blocks[t])]);
    sol.Pi.push_back(res.blocks[static_cast<std::size_t>(prog.Pi_blocks[t])]);
  }
  return sol;
}

CovarianceSchedule extract_policy_covariances(const SdpSolution& solution,
                                              const SystemModel& model) {
  if (solution.P.empty()) {
    throw InvalidModel("extract_policy_covariances: solution carries no covariances");
  }
  CovarianceSchedule s;
  if (model.horizon.is_infinite()) {
    const Mat& P = solution.P.front();
    s.P_pred.push_back(predict(P, model.A_at(0), model.W_at(0)));
    s.P_plus.push_back(incorporate(s.P_pred.back(), snr_y(model, 0)));
    s.P_post.push_back(P);
    return s;
  }
  Mat pred = linalg::symmetrize(model.P_init);
  for (std::size_t t = 0; t < solution.P.size(); ++t) {
    const int ti = static_cast<int>(t);
    if (t > 0) pred = predict(solution.P[t - 1], model.A_at(ti - 1), model.W_at(ti - 1));
    s.P_plus.push_back(incorporate(pred, snr_y(model, ti)));
    s.P_pred.push_back(pred);
    s.P_post.push_back(solution.P[t]);
  }
  return s;
}

}  // namespace lqgsi
