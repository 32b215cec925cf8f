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
// Helpers shared by the unit and acceptance tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "lqgsi/linalg.hpp"
#include "lqgsi/model.hpp"

namespace lqgsi::testing {

inline Mat scalar_mat(double x) {
  Mat X(1, 1);
  X(0, 0) = x;
  return X;
}

/// Stationary scalar system with Q = R = 1.
inline SystemModel scalar_model(double A, double B, double C, double W, double V,
                                double P_init = 1.0) {
  return SystemModel::stationary(scalar_mat(A), scalar_mat(B), scalar_mat(C), scalar_mat(W),
                                 scalar_mat(V), scalar_mat(P_init));
}

inline CostModel scalar_cost(double gamma, double Q = 1.0, double R = 1.0) {
  CostModel c;
  c.Q = {scalar_mat(Q)};
  c.R = {scalar_mat(R)};
  c.gamma = gamma;
  return c;
}

inline SystemModel with_horizon(SystemModel model, int T) {
  model.horizon = Horizon::finite(T);
  return model;
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Mat gaussian(Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> nd;
    Mat X(r, c);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = nd(gen_);
    return X;
  }

  /// Random symmetric PD matrix with eigenvalues in [lo, hi].
  Mat pd(Eigen::Index n, double lo = 0.2, double hi = 3.0) {
    const Eigen::HouseholderQR<Mat> qr(gaussian(n, n));
    const Mat U = qr.householderQ();
    Vec ev(n);
    for (Eigen::Index i = 0; i < n; ++i) ev(i) = uniform(lo, hi);
    return linalg::symmetrize(U * ev.asDiagonal() * U.transpose());
  }

  /// Random PSD matrix of the given rank.
  Mat psd(Eigen::Index n, Eigen::Index rank) {
    const Mat G = gaussian(rank, n);
    return linalg::symmetrize(G.transpose() * G);
  }

  /// Random square matrix rescaled to the given spectral radius.
  Mat with_radius(Eigen::Index n, double radius) {
    Mat A = gaussian(n, n);
    const double r = linalg::spectral_radius(A);
    return r > 0 ? Mat(A * (radius / r)) : A;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Largest |entry| of X - Y relative to max(1, |Y|).
inline double rel_diff(const Mat& X, const Mat& Y) {
  return (X - Y).cwiseAbs().maxCoeff() / std::max(1.0, Y.cwiseAbs().maxCoeff());
}

}  // namespace lqgsi::testing
