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

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "lqgsi/linalg.hpp"

namespace lqgsi {

/// Planning horizon: a finite number of steps T >= 1, or the infinite-horizon
/// average-cost setting (time-invariant matrices only).
class Horizon {
 public:
  static Horizon infinite() { return Horizon(0); }
  static Horizon finite(int steps);

  bool is_infinite() const noexcept { return steps_ == 0; }
  bool is_finite() const noexcept { return steps_ > 0; }
  /// Number of steps T for a finite horizon; 0 when infinite.
  int steps() const noexcept { return steps_; }

  friend bool operator==(const Horizon&, const Horizon&) = default;

 private:
  explicit Horizon(int steps) : steps_(steps) {}
  int steps_;
};

/// Matrix sequence indexed by step. A single entry means "constant over time".
using MatSeq = std::vector<Mat>;

/// Returns seq[t], or seq[0] when the sequence holds a single constant matrix.
const Mat& at_step(const MatSeq& seq, int t);

/// Linear plant x_{t+1} = A_t x_t + B_t u_t + w_t with controller-side
/// observation y_t = C_t x_t + v_t.
///
/// Steps are zero-based in the library: index t = 0 is the first step of the
/// horizon.  Sequences hold either one matrix (time-invariant) or exactly T
/// matrices.  A system without side observation has p = 0: C is 0 x n and V is
/// 0 x 0.
struct SystemModel {
  Horizon horizon = Horizon::infinite();
  MatSeq A;
  MatSeq B;
  MatSeq C;
  MatSeq W;
  MatSeq V;
  Mat P_init;  ///< Covariance of the initial state (P_{1|0}).

  int n() const { return A.empty() ? 0 : static_cast<int>(A.front().rows()); }
  int m() const { return B.empty() ? 0 : static_cast<int>(B.front().cols()); }
  int p() const { return C.empty() ? 0 : static_cast<int>(C.front().rows()); }

  /// True when every sequence is constant.
  bool time_invariant() const;

  const Mat& A_at(int t) const { return at_step(A, t); }
  const Mat& B_at(int t) const { return at_step(B, t); }
  const Mat& C_at(int t) const { return at_step(C, t); }
  const Mat& W_at(int t) const { return at_step(W, t); }
  const Mat& V_at(int t) const { return at_step(V, t); }

  /// Time-invariant model with an infinite horizon.
  static SystemModel stationary(Mat A, Mat B, Mat C, Mat W, Mat V, Mat P_init);
};

/// Quadratic cost sum_t x_{t+1}^T Q_t x_{t+1} + u_t^T R_t u_t with budget gamma.
struct CostModel {
  MatSeq Q;
  MatSeq R;
  double gamma = 0.0;

  const Mat& Q_at(int t) const { return at_step(Q, t); }
  const Mat& R_at(int t) const { return at_step(R, t); }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
  /// Violations joined with "; ".
  std::string summary() const;
};

/// Checks dimensions, symmetry and definiteness of a problem instance.
/// Never throws; the report lists every violation found.
ValidationReport validate(const SystemModel& model, const CostModel& cost);

/// Throws InvalidModel carrying the report summary when validation fails.
void require_valid(const SystemModel& model, const CostModel& cost);

struct SpectralReport {
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by modulus, descending
  double stabilization_rate_bits = 0.0;           ///< sum_i log2 max{1, |lambda_i|}
  bool stabilizable = false;                      ///< (A, B)
  bool detectable_y = false;                      ///< (A, C)
  bool observable_Q = false;                      ///< (A, Q^{1/2}) on the unit circle
};

/// Eigenvalue analysis of a time-invariant model.  `Q` is only used for the
/// unit-circle observability flag; pass an empty matrix to skip it.
SpectralReport spectral_report(const SystemModel& model, const Mat& Q = Mat());

/// sum_i log2 max{1, |lambda_i(A)|}.
double stabilization_rate_bits(const Mat& A);

/// PBH tests shared with the Riccati solvers.
bool is_stabilizable(const Mat& A, const Mat& B);
bool is_detectable(const Mat& A, const Mat& C);
bool is_observable_on_unit_circle(const Mat& A, const Mat& Csqrt, double band = 1e-8);

}  // namespace lqgsi
