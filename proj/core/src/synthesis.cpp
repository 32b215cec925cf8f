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
#include "lqgsi/synthesis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lqgsi/error.hpp"
#include "lqgsi/kalman.hpp"

namespace lqgsi {

namespace {

constexpr double kNegativeTol = 1e-5;
constexpr double kResidualTol = 1e-8;
constexpr double kRoundoffTol = 1e-12;

PolicyStep make_step(const Mat& P_pred, const Mat& P_post, const Mat& C, const Mat& V,
                     const Mat& K) {
  PolicyStep s;
  const Mat snrY = snr_matrix(C, V);
  s.snr_F = snr_f_from_P(P_post, P_pred, snrY);
  s.encoder = factor_snr(s.snr_F);
  // Rebuild the SNR from the retained directions so the filter and the rate
  // describe the same encoder.
  s.snr_F = linalg::symmetrize(s.encoder.D.transpose() * s.encoder.D);
  s.K = K;
  s.P_pred = P_pred;
  s.P_post = P_post;
  const Mat H = linalg::vstack(C, s.encoder.D);
  const Mat N = linalg::block_diag(V, s.encoder.M);
  s.L = kalman_gain(P_pred, H, N);
  s.rate_nats = step_info_nats(incorporate(P_pred, snrY), s.snr_F);
  return s;
}

}  // namespace

Mat snr_f_from_P(const Mat& P_post, const Mat& P_pred, const Mat& snrY) {
  const Mat post_info = linalg::inverse_pd(linalg::symmetrize(P_post));
  const Mat pred_info = linalg::inverse_pd(linalg::symmetrize(P_pred));
  const Mat raw = linalg::symmetrize(post_info - pred_info - snrY);
  const double scale =
      std::max({linalg::sym_norm(post_info), linalg::sym_norm(pred_info), linalg::sym_norm(snrY)});
  const double lo = linalg::min_eigenvalue(raw);
  if (lo < -kNegativeTol * scale) {
    std::ostringstream msg;
    msg << "encoder SNR has eigenvalue " << lo << " (scale " << scale
        << "); the covariances are not reachable by a measurement update";
    throw NumericalError(msg.str());
  }
  // Eigenvalues at rounding level of the information matrices are zero, not a
  // weak channel; this keeps the encoder silent at the no-communication point.
  Eigen::SelfAdjointEigenSolver<Mat> es(raw);
  Vec ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) <= kRoundoffTol * scale) ev(i) = 0.0;
  }
  return linalg::symmetrize(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
}

Mat snr_f_from_P(const Mat& P_post, const Mat& P_prev, const Mat& A, const Mat& W,
                 const Mat& snrY) {
  return snr_f_from_P(P_post, predict(P_prev, A, W), snrY);
}

EncoderFactor factor_snr(const Mat& snrF, double rel_tol) {
  EncoderFactor f;
  f.D = linalg::psd_factor(snrF, rel_tol);
  f.M = Mat::Identity(f.D.rows(), f.D.rows());
  return f;
}

double Policy::rate_bits() const { return rate_nats / std::numbers::ln2; }

const PolicyStep& Policy::step(int t) const {
  return stationary ? steps.front() : steps.at(static_cast<std::size_t>(t));
}

Policy assemble(const SystemModel& model, const CostModel& cost, const SdpSolution& solution) {
  if (solution.status != SolveStatus::Optimal && solution.status != SolveStatus::ZeroRate) {
    throw NumericalError("assemble: solution status is " + to_string(solution.status));
  }
  Policy policy;
  policy.status = solution.status;
  policy.gamma = cost.gamma;
  policy.cost = cost;

  if (model.horizon.is_infinite()) {
    const StationaryGains gains = solve_dare(model, cost);
    const Mat& A = model.A_at(0);
    const Mat& W = model.W_at(0);
    const Mat& P = solution.P.front();
    const Mat X = predict(P, A, W);
    policy.stationary = true;
    policy.steps.push_back(make_step(X, P, model.C_at(0), model.V_at(0), gains.K));
    const PolicyStep& s = policy.steps.front();

    const Mat snr = snr_matrix(model.C_at(0), model.V_at(0)) + s.snr_F;
    const Mat X_next = predict(incorporate(X, snr), A, W);
    policy.riccati_residual = (X_next - X).norm() / (1.0 + X.norm());
    const Mat H = linalg::vstack(model.C_at(0), s.encoder.D);
    policy.closed_loop_radius = linalg::spectral_radius(A - A * s.L * H);
    policy.rate_nats = s.rate_nats;
    policy.predicted_cost = (gains.Theta * P).trace() + (W * gains.S).trace();

    if (policy.riccati_residual > kResidualTol) {
      std::ostringstream msg;
      msg << "stationary covariance is not a filter fixed point (residual "
          << policy.riccati_residual << ")";
      throw NumericalError(msg.str());
    }
    if (!(policy.closed_loop_radius < 1.0)) {
      std::ostringstream msg;
      msg << "filter error dynamics are unstable (spectral radius " << policy.closed_loop_radius
          << ")";
      throw NumericalError(msg.str());
    }
    return policy;
  }

  const GainSchedule gains = backward_riccati(model, cost);
  const int T = gains.horizon();
  policy.stationary = false;
  policy.predicted_cost = (gains.Phi1 * model.P_init).trace();
  for (int t = 0; t < T; ++t) {
    const auto idx = static_cast<std::size_t>(t);
    const Mat P_pred = t == 0 ? linalg::symmetrize(model.P_init)
                              : predict(solution.P[idx - 1], model.A_at(t - 1), model.W_at(t - 1));
    policy.steps.push_back(
        make_step(P_pred, solution.P[idx], model.C_at(t), model.V_at(t), gains.K[idx]));
    policy.rate_nats += policy.steps.back().rate_nats;
    policy.predicted_cost +=
        (gains.Theta[idx] * solution.P[idx]).trace() + (gains.S[idx] * model.W_at(t)).trace();
  }
  return policy;
}

}  // namespace lqgsi
