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
#include "lqgsi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lqgsi/error.hpp"

namespace lqgsi::linalg {

Mat symmetrize(const Mat& X) { return 0.5 * (X + X.transpose()); }

double relative_asymmetry(const Mat& X) {
  if (X.size() == 0) return 0.0;
  const double scale = std::max(1e-300, X.cwiseAbs().maxCoeff());
  return (X - X.transpose()).cwiseAbs().maxCoeff() / scale;
}

namespace {

Vec sym_eigenvalues(const Mat& X) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(X), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

double sym_norm(const Mat& X) {
  if (X.size() == 0) return 0.0;
  return sym_eigenvalues(X).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat& X) {
  if (X.size() == 0) return std::numeric_limits<double>::infinity();
  return sym_eigenvalues(X).minCoeff();
}

bool is_psd(const Mat& X, double rel_tol) {
  if (X.size() == 0) return true;
  const Vec ev = sym_eigenvalues(X);
  const double scale = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() >= -rel_tol * scale;
}

bool is_pd(const Mat& X, double rel_tol) {
  if (X.size() == 0) return true;
  const Vec ev = sym_eigenvalues(X);
  const double scale = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() > 0.0 && ev.minCoeff() > rel_tol * scale;
}

double logdet_floored(const Mat& X, double floor) {
  if (X.size() == 0) return 0.0;
  const Vec ev = sym_eigenvalues(X);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) acc += std::log(std::max(ev(i), floor));
  return acc;
}

Mat sqrt_psd(const Mat& X) {
  if (X.size() == 0) return X;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(X));
  const Vec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return symmetrize(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
}

Mat inverse_pd(const Mat& X) {
  if (X.size() == 0) return X;
  Eigen::LLT<Mat> llt(symmetrize(X));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("inverse_pd: matrix is not numerically positive definite");
  }
  return symmetrize(llt.solve(Mat::Identity(X.rows(), X.cols())));
}

Mat project_psd(const Mat& X) {
  if (X.size() == 0) return X;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(X));
  const Vec d = es.eigenvalues().cwiseMax(0.0);
  return symmetrize(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
}

Mat psd_factor(const Mat& X, double rel_tol) {
  const Eigen::Index n = X.rows();
  if (n == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(X));
  const Vec& ev = es.eigenvalues();
  const double lmax = std::max(0.0, ev.maxCoeff());
  const double cut = rel_tol * lmax;
  // Eigenvalues come sorted ascending; keep the largest ones first in G.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (ev(i) > cut && ev(i) > 0.0) keep.push_back(i);
  }
  Mat G(static_cast<Eigen::Index>(keep.size()), n);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const Eigen::Index i = keep[r];
    G.row(static_cast<Eigen::Index>(r)) = std::sqrt(ev(i)) * es.eigenvectors().col(i).transpose();
  }
  return G;
}

std::vector<std::complex<double>> eigenvalues_by_modulus(const Mat& A) {
  std::vector<std::complex<double>> out;
  if (A.size() == 0) return out;
  Eigen::EigenSolver<Mat> es(A, false);
  const CVec ev = es.eigenvalues();
  out.assign(ev.data(), ev.data() + ev.size());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

double spectral_radius(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::EigenSolver<Mat> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool pbh_full_rank(const Mat& A, const Mat& BC, std::complex<double> lambda,
                   bool columns, double rel_tol) {
  const Eigen::Index n = A.rows();
  CMat shifted = A.cast<std::complex<double>>();
  shifted.diagonal().array() -= lambda;
  CMat M;
  if (columns) {
    M.resize(n, n + BC.cols());
    M << shifted, BC.cast<std::complex<double>>();
  } else {
    M.resize(n + BC.rows(), n);
    M << shifted, BC.cast<std::complex<double>>();
  }
  Eigen::JacobiSVD<CMat> svd(M);
  const Vec sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * scale) ++rank;
  }
  return rank == n;
}

Mat block_diag(const Mat& X, const Mat& Y) {
  Mat out = Mat::Zero(X.rows() + Y.rows(), X.cols() + Y.cols());
  out.topLeftCorner(X.rows(), X.cols()) = X;
  out.bottomRightCorner(Y.rows(), Y.cols()) = Y;
  return out;
}

Mat vstack(const Mat& X, const Mat& Y) {
  Mat out(X.rows() + Y.rows(), X.cols());
  if (X.rows() > 0) out.topRows(X.rows()) = X;
  if (Y.rows() > 0) out.bottomRows(Y.rows()) = Y;
  return out;
}

}  // namespace lqgsi::linalg
