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

#include <optional>
#include <span>
#include <vector>

#include "lqgsi/linalg.hpp"
#include "lqgsi/model.hpp"

namespace lqgsi {

/// Error covariances of the two-measurement filter, one entry per step:
///   P_pred[t]  covariance of x_t given everything before step t,
///   P_plus[t]  after also incorporating the free observation y_t,
///   P_post[t]  after also incorporating the encoder output f_t.
struct CovarianceSchedule {
  std::vector<Mat> P_pred;
  std::vector<Mat> P_plus;
  std::vector<Mat> P_post;

  std::size_t size() const { return P_post.size(); }
};

/// Information-form measurement quality C^T V^{-1} C.  A 0-row C gives the
/// n x n zero matrix.  Throws NumericalError when V is singular.
Mat snr_matrix(const Mat& C, const Mat& V);

/// (P^{-1} + snr)^{-1}, evaluated as P - P G^T (G P G^T + I)^{-1} G P with
/// G^T G = snr so that singular P needs no inverse.
Mat incorporate(const Mat& P, const Mat& snr);

/// A P A^T + W.
Mat predict(const Mat& P_post, const Mat& A, const Mat& W);

/// 1/2 log det(I + P_plus snr_F) in nats, computed in the symmetric form
/// 1/2 log det(I + G P_plus G^T) with G^T G = snr_F.
double step_info_nats(const Mat& P_plus, const Mat& snr_F);

/// sum_t 1/2 [log det P_plus[t] - log det P_post[t]] in nats.
double directed_info_nats(const CovarianceSchedule& schedule);

/// Runs the covariance recursion of the model's finite horizon (or `steps`
/// steps of a stationary model) with the given encoder SNR matrices.
/// `snr_F` holds one matrix per step, or a single matrix used at every step.
CovarianceSchedule propagate(const SystemModel& model, std::span<const Mat> snr_F, int steps);

/// Fixed point X = A incorporate(X, snr) A^T + W of the predictor Riccati
/// recursion, iterated from X = W.  Returns nullopt when (A, snr) is not
/// detectable or the recursion does not settle.
std::optional<Mat> stationary_prior_covariance(const Mat& A, const Mat& W, const Mat& snr,
                                               int max_iterations = 100000);

/// Kalman gain P_pred H^T (H P_pred H^T + N)^{-1}.
Mat kalman_gain(const Mat& P_pred, const Mat& H, const Mat& N);

/// Posterior state estimate of the two-measurement filter.
struct FilterState {
  Vec xhat;        ///< E[x_t | y^t, f^t]
  Vec innovation;  ///< last stacked innovation [y - C xpred; f - D xpred]
};

/// Matrices needed for one filter step.
struct FilterStepInputs {
  const Mat& A;  ///< previous-step dynamics
  const Mat& B;
  const Mat& C;
  const Mat& D;
  const Mat& L;  ///< gain for the stacked measurement [y; f]
};

/// Time update with (A, B, u_prev) followed by the stacked measurement update.
FilterState filter_step(const FilterState& state, const FilterStepInputs& in, const Vec& y,
                        const Vec& f, const Vec& u_prev);

/// Measurement update only (first step, where the prior mean is given).
FilterState measurement_update(const Vec& xpred, const Mat& C, const Mat& D, const Mat& L,
                               const Vec& y, const Vec& f);

}  // namespace lqgsi
