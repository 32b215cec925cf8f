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

#include <vector>

#include "lqgsi/linalg.hpp"
#include "lqgsi/model.hpp"

namespace lqgsi {

/// Finite-horizon controller data from the backward Riccati recursion.
/// All sequences have length T and use zero-based steps.
struct GainSchedule {
  std::vector<Mat> S;      ///< value matrices, S[T-1] = Q[T-1]
  std::vector<Mat> K;      ///< control gains, u_t = -K[t] xhat_t
  std::vector<Mat> Theta;  ///< K^T (B^T S B + R) K, the price of estimation error
  Mat Phi1;                ///< A_0^T S_0 A_0 - K_0^T (B_0^T S_0 B_0 + R_0) K_0

  int horizon() const { return static_cast<int>(S.size()); }
};

/// Stationary controller data from the stabilizing DARE solution.
struct StationaryGains {
  Mat S;
  Mat K;
  Mat Theta;
  int iterations = 0;
  double residual = 0.0;         ///< Frobenius norm of the DARE residual at S
  double closed_loop_radius = 0;  ///< rho(A - B K)
};

/// One backward step: returns {S_prev_without_Q, K, Theta} for value matrix S.
/// S_prev = A^T S A - K^T (B^T S B + R) K (add Q_{t-1} to obtain S_{t-1}).
struct RiccatiStep {
  Mat Phi;
  Mat K;
  Mat Theta;
};
RiccatiStep riccati_step(const Mat& A, const Mat& B, const Mat& R, const Mat& S);

/// Backward recursion over T steps with S_{T} = Q_{T}.  Sequences in the
/// model and cost must have length 1 or at least T.
GainSchedule backward_riccati(const SystemModel& model, const CostModel& cost, int T);

/// Backward recursion over the model's own finite horizon.
GainSchedule backward_riccati(const SystemModel& model, const CostModel& cost);

struct DareOptions {
  double rel_change_tol = 1e-12;
  int max_iterations = 100000;
};

/// A^T S A - S - A^T S B (B^T S B + R)^{-1} B^T S A + Q.
Mat dare_residual(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& S);

/// Stabilizing solution of the control DARE.
///
/// Requires (A, B) stabilizable and (A, Q^{1/2}) observable on the unit circle;
/// a zero Q is rejected as well since no mode is then observable through the
/// cost.  Throws InfeasibleStructure naming the failed test, or NumericalError
/// when the iteration stalls.
StationaryGains solve_dare(const Mat& A, const Mat& B, const Mat& Q, const Mat& R,
                           const DareOptions& opts = {});

StationaryGains solve_dare(const SystemModel& model, const CostModel& cost,
                           const DareOptions& opts = {});

}  // namespace lqgsi
