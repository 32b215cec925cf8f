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

#include "lqgsi/error.hpp"
#include "lqgsi/maxdet.hpp"
#include "support.hpp"

namespace lqgsi::sdp {
namespace {

using lqgsi::testing::Random;
using lqgsi::testing::rel_diff;

// Two blocks (3x3 and 2x2) coupled through an LMI, one log-det objective on
// each block and a trace budget.  The identity start is strictly feasible.
MaxDetProblem coupled_problem(Random& rng) {
  MaxDetProblem p;
  p.block_dims = {3, 2};
  p.constant = 0.25;
  LogDetTerm a;
  a.weight = 0.5;
  a.expr.constant = Mat::Zero(3, 3);
  a.expr.terms.push_back({0, 1.0, Mat::Identity(3, 3)});
  p.objective.push_back(a);
  LogDetTerm b;
  b.weight = 0.7;
  b.expr.constant = 0.1 * Mat::Identity(4, 4);
  const Mat U = rng.gaussian(4, 2) * 0.3;
  b.expr.terms.push_back({1, 1.0, U});
  p.objective.push_back(b);

  AffineSym g;
  g.constant = 4.0 * Mat::Identity(3, 3);
  g.terms.push_back({0, -1.0, Mat::Identity(3, 3)});
  g.terms.push_back({1, -1.0, rng.gaussian(3, 2) * 0.4});
  p.lmis.push_back(g);
  AffineSym pos;
  pos.constant = Mat::Zero(2, 2);
  pos.terms.push_back({1, 1.0, Mat::Identity(2, 2)});
  p.lmis.push_back(pos);

  p.budget.weights = {{0, rng.pd(3, 0.5, 1.5)}, {1, rng.pd(2, 0.5, 1.5)}};
  p.budget.constant = 0.5;
  p.budget.bound = 20.0;
  return p;
}

std::vector<Mat> identity_start() { return {Mat::Identity(3, 3), Mat::Identity(2, 2)}; }

TEST(Barrier, PackRoundTrip) {
  Random rng(1);
  const MaxDetProblem p = coupled_problem(rng);
  const Barrier bar(p);
  EXPECT_EQ(bar.num_variables(), 6 + 3);
  const std::vector<Mat> blocks = {rng.pd(3), rng.pd(2)};
  const std::vector<Mat> back = bar.unpack(bar.pack(blocks));
  EXPECT_LT(rel_diff(back[0], blocks[0]), 1e-15);
  EXPECT_LT(rel_diff(back[1], blocks[1]), 1e-15);
}

TEST(Barrier, GradientAndHessianMatchFiniteDifferences) {
  Random rng(2);
  const MaxDetProblem p = coupled_problem(rng);
  const Barrier bar(p);
  const double t = 3.0;
  const Vec z = bar.pack({Mat::Identity(3, 3) + 0.1 * rng.pd(3), Mat::Identity(2, 2)});
  Vec g;
  Mat H;
  ASSERT_TRUE(bar.derivatives(z, t, g, H));
  const double h = 1e-6;
  for (int i = 0; i < bar.num_variables(); ++i) {
    Vec zp = z, zm = z;
    zp(i) += h;
    zm(i) -= h;
    const double fd = (*bar.value(zp, t) - *bar.value(zm, t)) / (2 * h);
    EXPECT_NEAR(g(i), fd, 1e-6 * (1 + std::abs(fd))) << "variable " << i;
    Vec gp, gm;
    Mat tmp;
    ASSERT_TRUE(bar.derivatives(zp, t, gp, tmp));
    ASSERT_TRUE(bar.derivatives(zm, t, gm, tmp));
    const Vec col = (gp - gm) / (2 * h);
    EXPECT_LT((H.col(i) - col).norm(), 1e-5 * (1 + col.norm())) << "column " << i;
  }
}

TEST(Barrier, SparseAndDenseHessiansAgree) {
  Random rng(3);
  const MaxDetProblem p = coupled_problem(rng);
  const Barrier bar(p);
  const Vec z = bar.pack(identity_start());
  Vec g1, g2;
  Mat H;
  Eigen::SparseMatrix<double> S;
  ASSERT_TRUE(bar.derivatives(z, 2.0, g1, H));
  ASSERT_TRUE(bar.derivatives(z, 2.0, g2, S));
  EXPECT_LT((g1 - g2).norm(), 1e-12);
  EXPECT_LT((H - Mat(S)).norm(), 1e-12 * (1 + H.norm()));
}

TEST(Barrier, OutsideDomainIsRejected) {
  Random rng(4);
  const MaxDetProblem p = coupled_problem(rng);
  const Barrier bar(p);
  const Vec z = bar.pack({10.0 * Mat::Identity(3, 3), Mat::Identity(2, 2)});
  EXPECT_FALSE(bar.value(z, 1.0).has_value());
  Vec g;
  Mat H;
  EXPECT_FALSE(bar.derivatives(z, 1.0, g, H));
}

TEST(Minimize, BudgetOnlyProblemHasScaledIdentitySolution) {
  // min -1/2 log det X  s.t. Tr(X) <= 6, X <= 5 I  =>  X = 2 I.
  MaxDetProblem p;
  p.block_dims = {3};
  LogDetTerm term;
  term.expr.constant = Mat::Zero(3, 3);
  term.expr.terms.push_back({0, 1.0, Mat::Identity(3, 3)});
  p.objective.push_back(term);
  AffineSym cap;
  cap.constant = 5.0 * Mat::Identity(3, 3);
  cap.terms.push_back({0, -1.0, Mat::Identity(3, 3)});
  p.lmis.push_back(cap);
  p.budget.weights = {{0, Mat::Identity(3, 3)}};
  p.budget.bound = 6.0;

  const BarrierResult r = minimize(p, {Mat::Identity(3, 3)});
  ASSERT_TRUE(r.converged);
  EXPECT_LT(rel_diff(r.blocks[0], 2.0 * Mat::Identity(3, 3)), 1e-6);
  EXPECT_NEAR(r.objective, -1.5 * std::log(2.0), 1e-8);
  EXPECT_LE(r.kkt.gap_bound, 1e-9);
}

TEST(Minimize, ActiveLmiBindsTheSolution) {
  // min -log x  s.t. 1 - x >= 0, x <= 5  =>  x = 1.
  MaxDetProblem p;
  p.block_dims = {1};
  LogDetTerm term;
  term.weight = 1.0;
  term.expr.constant = Mat::Zero(1, 1);
  term.expr.terms.push_back({0, 1.0, Mat::Identity(1, 1)});
  p.objective.push_back(term);
  AffineSym cap;
  cap.constant = Mat::Identity(1, 1);
  cap.terms.push_back({0, -1.0, Mat::Identity(1, 1)});
  p.lmis.push_back(cap);
  p.budget.weights = {{0, Mat::Identity(1, 1)}};
  p.budget.bound = 5.0;
  const BarrierResult r = minimize(p, {Mat::Constant(1, 1, 0.5)});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.blocks[0](0, 0), 1.0, 1e-8);
}

TEST(Minimize, InfeasibleStartThrows) {
  Random rng(5);
  const MaxDetProblem p = coupled_problem(rng);
  EXPECT_THROW(minimize(p, {10.0 * Mat::Identity(3, 3), Mat::Identity(2, 2)}), NumericalError);
}

TEST(Minimize, IterationCapReportsNonConvergence) {
  Random rng(6);
  const MaxDetProblem p = coupled_problem(rng);
  BarrierOptions opts;
  opts.max_newton = 2;
  const BarrierResult r = minimize(p, identity_start(), opts);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.newton_iterations, 2);
}

TEST(Minimize, SparsePathMatchesDensePath) {
  Random rng(7);
  const MaxDetProblem p = coupled_problem(rng);
  const BarrierResult dense = minimize(p, identity_start());
  BarrierOptions opts;
  opts.dense_limit = 0;
  const BarrierResult sparse = minimize(p, identity_start(), opts);
  ASSERT_TRUE(dense.converged);
  ASSERT_TRUE(sparse.converged);
  EXPECT_NEAR(dense.objective, sparse.objective, 1e-8);
  EXPECT_GE(dense.kkt.min_lmi_eigenvalue, 0.0);
  EXPECT_GE(dense.kkt.budget_slack, 0.0);
}

}  // namespace
}  // namespace lqgsi::sdp
