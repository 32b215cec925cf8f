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
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "lqgsi/linalg.hpp"

namespace lqgsi::sdp {

/// Contribution sign * U X_block U^T of one symmetric decision block.
struct BlockTerm {
  int block = 0;
  double sign = 1.0;
  Mat U;
};

/// Symmetric expression affine in the decision blocks:
///   F(X) = constant + sum_k sign_k U_k X_{block_k} U_k^T.
struct AffineSym {
  Mat constant;
  std::vector<BlockTerm> terms;

  Eigen::Index dim() const { return constant.rows(); }
  Mat evaluate(const std::vector<Mat>& blocks) const;
};

/// weight * (-log det expr) in the objective.
struct LogDetTerm {
  double weight = 0.5;
  AffineSym expr;
};

/// constant + sum_b Tr(weight_b X_b) <= bound.
struct TraceBudget {
  std::vector<std::pair<int, Mat>> weights;
  double constant = 0.0;
  double bound = 0.0;

  double evaluate(const std::vector<Mat>& blocks) const;
};

/// Determinant-maximization program
///
///   minimize   constant + sum_i w_i (-log det F_i(X))
///   subject to G_j(X) >= 0 (LMIs),  budget(X) <= bound,
///
/// over a list of symmetric matrix blocks X.  Every F_i and G_j is affine in X,
/// so the program is convex.
struct MaxDetProblem {
  std::vector<int> block_dims;
  double constant = 0.0;
  std::vector<LogDetTerm> objective;
  std::vector<AffineSym> lmis;
  TraceBudget budget;

  /// Objective value, or +inf when some log-det argument is not PD.
  double objective_value(const std::vector<Mat>& blocks) const;

  /// Sum of LMI dimensions plus one for the budget.
  int barrier_degree() const;

  /// Smallest eigenvalue over all LMIs.
  double min_lmi_eigenvalue(const std::vector<Mat>& blocks) const;
};

/// Barrier function t * f0(X) - sum_j log det G_j(X) - log(bound - budget(X))
/// over the lower-triangular parametrization of the blocks.
class Barrier {
 public:
  explicit Barrier(const MaxDetProblem& problem);

  int num_variables() const { return num_vars_; }
  Vec pack(const std::vector<Mat>& blocks) const;
  std::vector<Mat> unpack(const Vec& z) const;

  /// Barrier value at z, or nullopt outside the strict domain.
  std::optional<double> value(const Vec& z, double t) const;

  /// Gradient and dense Hessian.  Returns false outside the strict domain.
  bool derivatives(const Vec& z, double t, Vec& grad, Mat& hess) const;

  /// Gradient and sparse Hessian (lower and upper triangles both stored).
  bool derivatives(const Vec& z, double t, Vec& grad, Eigen::SparseMatrix<double>& hess) const;

 private:
  template <class Sink>
  bool accumulate(const Vec& z, double t, Vec& grad, Sink& sink) const;

  const MaxDetProblem& problem_;
  std::vector<int> offsets_;
  int num_vars_ = 0;
  Vec budget_coeffs_;
};

struct BarrierOptions {
  double tol = 1e-9;           ///< stop when barrier_degree / t < tol
  int max_newton = 2000;       ///< total Newton steps across all centerings
  double mu_factor = 10.0;     ///< t <- mu * t after each centering
  double t0 = 1.0;
  double newton_tol = 1e-10;   ///< centering ends when lambda^2 / 2 < newton_tol
  double armijo = 0.3;
  double shrink = 0.5;
  int dense_limit = 1500;      ///< use a sparse factorization above this many variables
};

struct KktReport {
  double min_lmi_eigenvalue = 0.0;
  double budget_slack = 0.0;
  double newton_decrement = 0.0;  ///< lambda^2 / 2 at the last centering
  double barrier_t = 0.0;
  double gap_bound = 0.0;         ///< barrier_degree / t
};

struct BarrierResult {
  std::vector<Mat> blocks;
  double objective = 0.0;
  int newton_iterations = 0;
  int outer_iterations = 0;
  bool converged = false;
  KktReport kkt;
};

/// Path-following barrier method from a strictly feasible start.
/// Throws NumericalError if `start` is not strictly feasible.
BarrierResult minimize(const MaxDetProblem& problem, const std::vector<Mat>& start,
                       const BarrierOptions& opts = {});

}  // namespace lqgsi::sdp
