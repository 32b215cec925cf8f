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
#include "lqgsi/kalman.hpp"

#include <cmath>

#include "lqgsi/error.hpp"

namespace lqgsi {

Mat snr_matrix(const Mat& C, const Mat& V) {
  const Eigen::Index n = C.cols();
  if (C.rows() == 0) return Mat::Zero(n, n);
  if (V.rows() != C.rows() || V.cols() != C.rows()) {
    throw InvalidModel("snr_matrix: V must be p x p with p = rows(C)");
  }
  Eigen::LLT<Mat> llt(linalg::symmetrize(V));
  if (llt.info() != Eigen::Success || !linalg::is_pd(V)) {
    throw NumericalError("snr_matrix: V is singular");
  }
  const Mat VinvC = llt.solve(C);
  return linalg::symmetrize(C.transpose() * VinvC);
}

Mat incorporate(const Mat& P, const Mat& snr) {
  const Mat G = linalg::psd_factor(snr);
  if (G.rows() == 0) return linalg::symmetrize(P);
  const Mat GP = G * P;
  Mat S = GP * G.transpose();
  S.diagonal().array() += 1.0;
  Eigen::LLT<Mat> llt(linalg::symmetrize(S));
  return linalg::symmetrize(P - GP.transpose() * llt.solve(GP));
}

Mat predict(const Mat& P_post, const Mat& A, const Mat& W) {
  return linalg::symmetrize(A * P_post * A.transpose() + W);
}

double step_info_nats(const Mat& P_plus, const Mat& snr_F) {
  const Mat G = linalg::psd_factor(snr_F);
  if (G.rows() == 0) return 0.0;
  Mat S = G * P_plus * G.transpose();
  S.diagonal().array() += 1.0;
  return 0.5 * linalg::logdet_floored(S);
}

double directed_info_nats(const CovarianceSchedule& schedule) {
  double total = 0.0;
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    total += 0.5 * (linalg::logdet_floored(schedule.P_plus[t]) -
                    linalg::logdet_floored(schedule.P_post[t]));
  }
  return total;
}

CovarianceSchedule propagate(const SystemModel& model, std::span<const Mat> snr_F, int steps) {
  if (steps < 1) throw InvalidModel("propagate: steps must be >= 1");
  if (snr_F.empty()) throw InvalidModel("propagate: no encoder SNR given");
  CovarianceSchedule s;
  s.P_pred.reserve(static_cast<std::size_t>(steps));
  s.P_plus.reserve(static_cast<std::size_t>(steps));
  s.P_post.reserve(static_cast<std::size_t>(steps));
  Mat pred = linalg::symmetrize(model.P_init);
  for (int t = 0; t < steps; ++t) {
    if (t > 0) pred = predict(s.P_post.back(), model.A_at(t - 1), model.W_at(t - 1));
    const Mat& snrF = snr_F.size() == 1 ? snr_F[0] : snr_F[static_cast<std::size_t>(t)];
    Mat plus = incorporate(pred, snr_matrix(model.C_at(t), model.V_at(t)));
    Mat post = incorporate(plus, snrF);
    s.P_pred.push_back(std::move(pred));
    s.P_plus.push_back(std::move(plus));
    s.P_post.push_back(std::move(post));
    pred = Mat();
  }
  return s;
}

std::optional<Mat> stationary_prior_covariance(const Mat& A, const Mat& W, const Mat& snr,
                                               int max_iterations) {
  const Mat G = linalg::psd_factor(snr, 1e-14);
  if (!is_detectable(A, G)) return std::nullopt;
  Mat X = linalg::symmetrize(W);
  for (int k = 0; k < max_iterations; ++k) {
    Mat next = predict(incorporate(X, snr), A, W);
    const double change = (next - X).norm();
    X = std::move(next);
    if (!X.allFinite() || X.norm() > 1e15) return std::nullopt;
    if (change <= 1e-13 * (1.0 + X.norm())) return X;
  }
  return std::nullopt;
}

Mat kalman_gain(const Mat& P_pred, const Mat& H, const Mat& N) {
  if (H.rows() == 0) return Mat::Zero(P_pred.rows(), 0);
  const Mat PHt = P_pred * H.transpose();
  const Mat S = linalg::symmetrize(H * PHt + N);
  Eigen::LLT<Mat> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("kalman_gain: innovation covariance is singular");
  }
  // L = P H^T S^{-1}  <=>  L^T = S^{-1} H P.
  return llt.solve(PHt.transpose()).transpose();
}

FilterState measurement_update(const Vec& xpred, const Mat& C, const Mat& D, const Mat& L,
                               const Vec& y, const Vec& f) {
  FilterState out;
  out.innovation.resize(C.rows() + D.rows());
  if (C.rows() > 0) out.innovation.head(C.rows()) = y - C * xpred;
  if (D.rows() > 0) out.innovation.tail(D.rows()) = f - D * xpred;
  out.xhat = xpred;
  if (out.innovation.size() > 0) out.xhat.noalias() += L * out.innovation;
  return out;
}

FilterState filter_step(const FilterState& state, const FilterStepInputs& in, const Vec& y,
                        const Vec& f, const Vec& u_prev) {
  Vec xpred = in.A * state.xhat;
  if (in.B.cols() > 0) xpred.noalias() += in.B * u_prev;
  return measurement_update(xpred, in.C, in.D, in.L, y, f);
}

}  // namespace lqgsi
