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
#include "lqgsi/lqr.hpp"

#include <cmath>
#include <sstream>

#include "lqgsi/error.hpp"

namespace lqgsi {

namespace {

constexpr double kMinRcond = 1e-14;

}  // namespace

RiccatiStep riccati_step(const Mat& A, const Mat& B, const Mat& R, const Mat& S) {
  const Mat BtS = B.transpose() * S;
  const Mat G = linalg::symmetrize(BtS * B + R);
  RiccatiStep out;
  if (G.size() == 0) {
    out.K = Mat::Zero(0, A.cols());
    out.Theta = Mat::Zero(A.cols(), A.cols());
    out.Phi = linalg::symmetrize(A.transpose() * S * A);
    return out;
  }
  Eigen::LDLT<Mat> ldlt(G);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < kMinRcond) {
    throw NumericalError("Riccati step: B^T S B + R is numerically singular");
  }
  out.K = ldlt.solve(BtS * A);
  out.Theta = linalg::symmetrize(out.K.transpose() * G * out.K);
  out.Phi = linalg::symmetrize(A.transpose() * S * A - out.Theta);
  return out;
}

GainSchedule backward_riccati(const SystemModel& model, const CostModel& cost, int T) {
  if (T < 1) throw InvalidModel("backward_riccati requires T >= 1");
  GainSchedule g;
  g.S.resize(static_cast<std::size_t>(T));
  g.K.resize(static_cast<std::size_t>(T));
  g.Theta.resize(static_cast<std::size_t>(T));

  Mat S = linalg::symmetrize(cost.Q_at(T - 1));
  for (int t = T - 1; t >= 0; --t) {
    const auto idx = static_cast<std::size_t>(t);
    g.S[idx] = S;
    const RiccatiStep step = riccati_step(model.A_at(t), model.B_at(t), cost.R_at(t), S);
    g.K[idx] = step.K;
    g.Theta[idx] = step.Theta;
    if (t > 0) {
      S = linalg::symmetrize(step.Phi + cost.Q_at(t - 1));
    } else {
      g.Phi1 = step.Phi;
    }
  }
  return g;
}

GainSchedule backward_riccati(const SystemModel& model, const CostModel& cost) {
  if (!model.horizon.is_finite()) {
    throw UnsupportedOperation("backward_riccati needs a finite horizon; use solve_dare");
  }
  return backward_riccati(model, cost, model.horizon.steps());
}

Mat dare_residual(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& S) {
  const RiccatiStep step = riccati_step(A, B, R, S);
  return step.Phi - S + Q;
}

StationaryGains solve_dare(const Mat& A, const Mat& B, const Mat& Q, const Mat& R,
                           const DareOptions& opts) {
  if (!is_stabilizable(A, B)) {
    throw InfeasibleStructure("DARE: (A, B) is not stabilizable (PBH rank test failed)");
  }
  const Mat Qsqrt = linalg::sqrt_psd(Q);
  if (Q.size() > 0 && linalg::sym_norm(Q) == 0.0) {
    throw InfeasibleStructure("DARE: Q = 0, so (A, Q^{1/2}) has no observable mode");
  }
  if (!is_observable_on_unit_circle(A, Qsqrt)) {
    throw InfeasibleStructure(
        "DARE: (A, Q^{1/2}) has an unobservable eigenvalue on the unit circle (PBH rank test failed)");
  }

  // Value iteration from S = Q increases monotonically to the stabilizing solution.
  Mat S = linalg::symmetrize(Q);
  StationaryGains out;
  bool converged = false;
  for (int k = 1; k <= opts.max_iterations; ++k) {
    const RiccatiStep step = riccati_step(A, B, R, S);
    Mat next = linalg::symmetrize(step.Phi + Q);
    const double change = (next - S).norm();
    S = std::move(next);
    out.iterations = k;
    if (!S.allFinite()) break;
    if (change <= opts.rel_change_tol * (1.0 + S.norm())) {
      converged = true;
      break;
    }
  }

  const double residual = S.allFinite() ? dare_residual(A, B, Q, R, S).norm() : INFINITY;
  if (!converged || residual > 1e-9 * (1.0 + S.norm())) {
    std::ostringstream os;
    os << "DARE: no convergence after " << out.iterations << " iterations (residual " << residual
       << ")";
    throw NumericalError(os.str());
  }
  const RiccatiStep step = riccati_step(A, B, R, S);
  out.S = S;
  out.K = step.K;
  out.Theta = step.Theta;
  out.residual = residual;
  out.closed_loop_radius = linalg::spectral_radius(A - B * step.K);
  if (!(out.closed_loop_radius < 1.0 - 1e-9)) {
    std::ostringstream os;
    os << "DARE: solution is not stabilizing (rho(A - BK) = " << out.closed_loop_radius << ")";
    throw NumericalError(os.str());
  }
  return out;
}

StationaryGains solve_dare(const SystemModel& model, const CostModel& cost,
                           const DareOptions& opts) {
  if (!model.time_invariant() || cost.Q.size() != 1 || cost.R.size() != 1) {
    throw UnsupportedOperation("solve_dare requires time-invariant matrices");
  }
  return solve_dare(model.A.front(), model.B.front(), cost.Q.front(), cost.R.front(), opts);
}

}  // namespace lqgsi
