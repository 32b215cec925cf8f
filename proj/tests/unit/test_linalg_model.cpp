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
#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "lqgsi/error.hpp"
#include "lqgsi/linalg.hpp"
#include "lqgsi/model.hpp"
#include "lqgsi/reference_systems.hpp"
#include "support.hpp"

namespace lqgsi {
namespace {

using testing::scalar_cost;
using testing::scalar_mat;
using testing::scalar_model;

bool mentions(const ValidationReport& r, const std::string& text) {
  for (const auto& v : r.violations) {
    if (v.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(Validate, ScalarInstanceIsValid) {
  const ValidationReport r = validate(scalar_model(2, 1, 1, 1, 1), scalar_cost(10));
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(Validate, SingularObservationNoise) {
  const ValidationReport r = validate(scalar_model(2, 1, 1, 1, 0), scalar_cost(10));
  EXPECT_TRUE(mentions(r, "V not PD")) << r.summary();
}

TEST(Validate, IndefiniteStateWeight) {
  CostModel cost = scalar_cost(10);
  Mat Q(2, 2);
  Q << 1, 0, 0, -1e-3;
  cost.Q = {Q};
  cost.R = {scalar_mat(1)};
  SystemModel m = SystemModel::stationary(Mat::Identity(2, 2), Mat::Ones(2, 1), Mat::Zero(0, 2),
                                          Mat::Identity(2, 2), Mat(0, 0), Mat::Identity(2, 2));
  const ValidationReport r = validate(m, cost);
  EXPECT_TRUE(mentions(r, "Q not PSD")) << r.summary();
}

TEST(Validate, ReportsEveryViolationAndIsRepeatable) {
  SystemModel m = scalar_model(2, 1, 1, -1, 0);
  CostModel c = scalar_cost(-1);
  const ValidationReport first = validate(m, c);
  const ValidationReport second = validate(m, c);
  EXPECT_GE(first.violations.size(), 3u);
  EXPECT_EQ(first.violations, second.violations);
  EXPECT_THROW(require_valid(m, c), InvalidModel);
}

TEST(Validate, AsymmetryBeyondToleranceIsRejected) {
  Mat W(2, 2);
  W << 1, 0.1, 0.2, 1;
  SystemModel m = SystemModel::stationary(Mat::Identity(2, 2), Mat::Ones(2, 1), Mat::Zero(0, 2), W,
                                          Mat(0, 0), Mat::Identity(2, 2));
  CostModel c;
  c.Q = {Mat::Identity(2, 2)};
  c.R = {scalar_mat(1)};
  c.gamma = 1;
  EXPECT_TRUE(mentions(validate(m, c), "W not symmetric"));
}

TEST(Validate, NoSideObservationIsLegal) {
  SystemModel m = SystemModel::stationary(scalar_mat(2), scalar_mat(1), Mat::Zero(0, 1),
                                          scalar_mat(1), Mat(0, 0), scalar_mat(1));
  EXPECT_TRUE(validate(m, scalar_cost(10)).ok());
  EXPECT_EQ(m.p(), 0);
}

TEST(Validate, SequenceLengthMustMatchHorizon) {
  SystemModel m = testing::with_horizon(scalar_model(2, 1, 1, 1, 1), 3);
  m.A = {scalar_mat(1), scalar_mat(2)};
  EXPECT_FALSE(validate(m, scalar_cost(10)).ok());
}

TEST(Spectral, BenchmarkPlantStabilizationRate) {
  const SystemModel m = reference::snr_model(1.0);
  const SpectralReport r = spectral_report(m, Mat::Identity(4, 4));
  EXPECT_NEAR(r.stabilization_rate_bits, 1.1685, 1e-3);
  ASSERT_EQ(r.eigenvalues.size(), 4u);
  EXPECT_NEAR(std::abs(r.eigenvalues.front()), 1.7124, 1e-3);
  EXPECT_NEAR(r.eigenvalues.front().real(), -1.7124, 1e-3);
  EXPECT_TRUE(r.stabilizable);
  EXPECT_TRUE(r.detectable_y);
  EXPECT_TRUE(r.observable_Q);
}

TEST(Spectral, StableScalarHasZeroRate) {
  const SpectralReport r = spectral_report(scalar_model(0.5, 1, 1, 1, 1), scalar_mat(1));
  EXPECT_EQ(r.stabilization_rate_bits, 0.0);
}

TEST(Spectral, TimeVaryingModelIsUnsupported) {
  SystemModel m = testing::with_horizon(scalar_model(2, 1, 1, 1, 1), 2);
  EXPECT_THROW(spectral_report(m), UnsupportedOperation);
}

TEST(Spectral, BlindObservationHidesTheLargestMode) {
  // The coefficients are rounded to two decimals, so the mode is only nearly
  // hidden: the pair stays detectable but C v is three orders below |C|.
  const Eigen::EigenSolver<Mat> es(reference::plant_A());
  Eigen::Index k = 0;
  es.eigenvalues().real().minCoeff(&k);
  EXPECT_NEAR(es.eigenvalues()(k).real(), -1.7124, 1e-4);
  const Eigen::VectorXcd v = es.eigenvectors().col(k).normalized();
  const Eigen::MatrixXcd C = reference::blind_C().cast<std::complex<double>>();
  EXPECT_LT((C * v).norm(), 1e-2);
  EXPECT_GT(reference::blind_C().norm(), 5.0);
}

TEST(Spectral, RateIsSimilarityInvariant) {
  testing::Random rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(1, 5);
    const Mat A = rng.gaussian(n, n) * 1.2;
    // Well-conditioned transform: orthogonal times a mild diagonal scaling.
    const Eigen::HouseholderQR<Mat> qr(rng.gaussian(n, n));
    Vec s(n);
    for (int i = 0; i < n; ++i) s(i) = rng.uniform(0.5, 2.0);
    const Mat T = Mat(qr.householderQ()) * s.asDiagonal();
    const Mat At = T * A * T.inverse();
    EXPECT_NEAR(stabilization_rate_bits(A), stabilization_rate_bits(At), 1e-9);
  }
}

TEST(Linalg, PsdFactorReconstructs) {
  testing::Random rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(1, 6);
    const int r = rng.integer(0, n);
    const Mat X = rng.psd(n, r);
    const Mat G = linalg::psd_factor(X, 1e-12);
    EXPECT_LE(G.rows(), r);
    EXPECT_LT(testing::rel_diff(G.transpose() * G, X), 1e-10);
  }
}

TEST(Linalg, InversePdRejectsSingular) {
  EXPECT_THROW(linalg::inverse_pd(Mat::Zero(2, 2)), NumericalError);
  const Mat X = testing::Random(5).pd(4);
  EXPECT_LT(testing::rel_diff(linalg::inverse_pd(X) * X, Mat::Identity(4, 4)), 1e-12);
}

TEST(Linalg, FlooredLogdetStaysFinite) {
  EXPECT_TRUE(std::isfinite(linalg::logdet_floored(Mat::Zero(3, 3))));
  EXPECT_NEAR(linalg::logdet_floored(2.0 * Mat::Identity(3, 3)), 3.0 * std::log(2.0), 1e-14);
}

TEST(Linalg, ProjectPsdClipsNegativeEigenvalues) {
  Mat X(2, 2);
  X << 1, 0, 0, -2;
  const Mat P = linalg::project_psd(X);
  EXPECT_NEAR(P(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(P(1, 1), 0.0, 1e-15);
  EXPECT_TRUE(linalg::is_psd(P));
}

}  // namespace
}  // namespace lqgsi
