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
#include <vector>

#include <Eigen/Dense>

namespace lqgsi {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace linalg {

/// (X + X^T) / 2.
Mat symmetrize(const Mat& X);

/// max |X_ij - X_ji| relative to max(1e-300, max |X_ij|).
double relative_asymmetry(const Mat& X);

/// Largest absolute eigenvalue of a symmetric matrix (0 for empty input).
double sym_norm(const Mat& X);

/// Smallest eigenvalue of a symmetric matrix (+inf for empty input).
double min_eigenvalue(const Mat& X);

/// PSD test: min eigenvalue >= -rel_tol * ||X||.
bool is_psd(const Mat& X, double rel_tol = 1e-9);

/// PD test: min eigenvalue > rel_tol * ||X|| and > 0.
bool is_pd(const Mat& X, double rel_tol = 1e-12);

/// log det of a symmetric PSD matrix through its eigenvalues, each floored
/// at `floor` so that singular inputs yield a large negative finite value.
double logdet_floored(const Mat& X, double floor = 1e-300);

/// Symmetric PSD square root; negative eigenvalues are floored at zero.
Mat sqrt_psd(const Mat& X);

/// Inverse of a symmetric PD matrix through a Cholesky factorization.
/// Throws NumericalError if X is not numerically PD.
Mat inverse_pd(const Mat& X);

/// Projection onto the PSD cone (negative eigenvalues set to zero).
Mat project_psd(const Mat& X);

/// Rank-revealing factor G (r x n) with G^T G = X for PSD X; eigenvalues
/// at or below rel_tol * lambda_max are dropped.
Mat psd_factor(const Mat& X, double rel_tol = 0.0);

/// Eigenvalues of a general square matrix, sorted by modulus (descending).
std::vector<std::complex<double>> eigenvalues_by_modulus(const Mat& A);

/// max |lambda_i(A)|.
double spectral_radius(const Mat& A);

/// True when the stacked matrix [A - lambda I; C] (or [A - lambda I, B] when
/// `columns` is true) has full rank n.  Used for PBH tests.
bool pbh_full_rank(const Mat& A, const Mat& BC, std::complex<double> lambda,
                   bool columns, double rel_tol = 1e-9);

/// Block-diagonal concatenation.
Mat block_diag(const Mat& X, const Mat& Y);

/// Row-wise stacking [X; Y] (column counts must match).
Mat vstack(const Mat& X, const Mat& Y);

}  // namespace linalg
}  // namespace lqgsi
