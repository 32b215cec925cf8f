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
#include "lqgsi/lqr.hpp"
#include "lqgsi/model.hpp"
#include "lqgsi/sdp.hpp"

namespace lqgsi {

/// Encoder SNR P_post^{-1} - P_pred^{-1} - snrY, clipped to the PSD cone.
/// Throws NumericalError when an eigenvalue lies below -1e-5 times the scale
/// of the inputs (the covariances violate the measurement-update ordering).
Mat snr_f_from_P(const Mat& P_post, const Mat& P_pred, const Mat& snrY);

/// Same with P_pred = A P_prev A^T + W.
Mat snr_f_from_P(const Mat& P_post, const Mat& P_prev, const Mat& A, const Mat& W,
                 const Mat& snrY);

/// Encoder f = D x + m with m ~ N(0, M), and snrF = D^T M^{-1} D.
struct EncoderFactor {
  Mat D;  ///< q x n
  Mat M;  ///< q x q, always the identity
  int q() const { return static_cast<int>(D.rows()); }
};

/// Keeps eigen-directions of snrF above rel_tol * lambda_max.
EncoderFactor factor_snr(const Mat& snrF, double rel_tol = 1e-8);

/// Encoder, filter and controller data for one step.
struct PolicyStep {
  EncoderFactor encoder;
  Mat snr_F;
  Mat K;       ///< u = -K xhat
  Mat L;       ///< Kalman gain for the stacked measurement [y; f]
  Mat P_pred;  ///< prior error covariance the gain was computed from
  Mat P_post;  ///< posterior error covariance
  double rate_nats = 0.0;
};

struct Policy {
  bool stationary = true;
  std::vector<PolicyStep> steps;  ///< a single entry in stationary mode
  SolveStatus status = SolveStatus::Optimal;
  /// Total rate (finite) or per-step rate (stationary) in nats.
  double rate_nats = 0.0;
  double predicted_cost = 0.0;
  double gamma = 0.0;
  CostModel cost;  ///< weights the policy was designed for
  /// Stationary mode: rho(A - A L H), the prior-error dynamics of the filter.
  double closed_loop_radius = 0.0;
  /// Stationary mode: relative residual of the filter Riccati fixed point at A P A^T + W.
  double riccati_residual = 0.0;

  double rate_bits() const;
  const PolicyStep& step(int t) const;
};

/// Builds the policy realizing a solved program.  Stationary policies are
/// certified: the filter error dynamics must be stable and the covariance
/// must be a fixed point of the filter Riccati recursion; NumericalError
/// otherwise.
Policy assemble(const SystemModel& model, const CostModel& cost, const SdpSolution& solution);

}  // namespace lqgsi
