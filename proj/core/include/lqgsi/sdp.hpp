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
#pragma once

#include <string>
#include <vector>

#include "lqgsi/kalman.hpp"
#include "lqgsi/lqr.hpp"
#include "lqgsi/maxdet.hpp"
#include "lqgsi/model.hpp"

namespace lqgsi {

enum class SolveStatus { Optimal, ZeroRate, InfeasibleBudget, MaxIter };

std::string to_string(SolveStatus status);

/// Cost levels bracketing the interesting budget range.
struct CostBounds {
  double gamma_min = 0.0;     ///< cost with the state known exactly at the controller
  double gamma_nocomm = 0.0;  ///< cost with the free observation only (+inf if unreachable)
};

/// A built determinant-maximization program together with the block layout
/// needed to read covariances back out of its solution.
struct Program {
  sdp::MaxDetProblem problem;
  bool infinite = false;
  int n = 0;
  std::vector<int> P_blocks;   ///< block index of P_{t|t}, one per step
  std::vector<int> Pi_blocks;  ///< block index of Pi_t; the last step aliases P
};

/// Finite-horizon program over the model's horizon.  Requires P_init and
/// every W_t to be positive definite.
Program build_finite(const SystemModel& model, const CostModel& cost, const GainSchedule& gains);

/// Stationary program (per-step rate).  Requires W positive definite.
Program build_infinite(const SystemModel& model, const CostModel& cost,
                       const StationaryGains& gains);

CostBounds cost_bounds(const SystemModel& model, const CostModel& cost, const GainSchedule& gains);
CostBounds cost_bounds(const SystemModel& model, const CostModel& cost,
                       const StationaryGains& gains);

struct SolveOptions {
  sdp::BarrierOptions barrier;
  /// Minimum LMI eigenvalue and budget slack demanded of the start point.
  double start_margin = 1e-8;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::MaxIter;
  std::vector<Mat> P;   ///< P_{t|t}; a single entry for the stationary program
  std::vector<Mat> Pi;  ///< auxiliary blocks, same length as P
  /// Total rate over the horizon (finite) or per-step rate (infinite), in nats.
  double objective_nats = 0.0;
  double predicted_cost = 0.0;
  CostBounds bounds;
  sdp::KktReport kkt;
  int newton_iterations = 0;
  int outer_iterations = 0;

  double rate_bits() const;
};

/// Full pipeline: gains, cost bounds, zero-rate and infeasibility screening,
/// program construction, start point and barrier solve.
SdpSolution solve(const SystemModel& model, const CostModel& cost, const SolveOptions& opts = {});

/// Strictly feasible start for a built program (blocks in program order).
/// Throws NumericalError if none is found.
std::vector<Mat> start_point(const Program& program, const SystemModel& model,
                             const CostModel& cost, double margin = 1e-8);

/// Covariance schedule implied by a solution.  For the stationary program the
/// schedule has one entry holding the fixed point.
CovarianceSchedule extract_policy_covariances(const SdpSolution& solution,
                                              const SystemModel& model);

}  // namespace lqgsi
