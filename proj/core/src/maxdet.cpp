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
#include "lqgsi/maxdet.hpp"

#include <cmath>
#include <algorithm>
#include <limits>

#include <Eigen/SparseCholesky>

#include "lqgsi/error.hpp"

namespace lqgsi::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// log det of a symmetric matrix through Cholesky; nullopt when not PD.
std::optional<double> chol_logdet(const Mat& X) {
  if (X.size() == 0) return 0.0;
  Eigen::LLT<Mat> llt(X);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto& L = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    const double d = L(i, i);
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    acc += std::log(d);
  }
  return 2.0 * acc;
}

struct DenseSink {
  Mat& H;
  void add(int i, int j, double v) { H(i, j) += v; }
};

struct TripletSink {
  std::vector<Eigen::Triplet<double>>& entries;
  void add(int i, int j, double v) { entries.emplace_back(i, j, v); }
};

}  // namespace

Mat AffineSym::evaluate(const std::vector<Mat>& blocks) const {
  Mat out = constant;
  for (const auto& term : terms) {
    out.noalias() += term.sign * (term.U * blocks[static_cast<std::size_t>(term.block)] *
                                  term.U.transpose());
  }
  return linalg::symmetrize(out);
}

double TraceBudget::evaluate(const std::vector<Mat>& blocks) const {
  double acc = constant;
  for (const auto& [block, weight] : weights) {
    acc += (weight.cwiseProduct(blocks[static_cast<std::size_t>(block)])).sum();
  }
  return acc;
}

double MaxDetProblem::objective_value(const std::vector<Mat>& blocks) const {
  double acc = constant;
  for (const auto& term : objective) {
    const auto ld = chol_logdet(term.expr.evaluate(blocks));
    if (!ld) return kInf;
    acc -= term.weight * *ld;
  }
  return acc;
}

int MaxDetProblem::barrier_degree() const {
  int nu = 1;
  for (const auto& g : lmis) nu += static_cast<int>(g.dim());
  return nu;
}

double MaxDetProblem::min_lmi_eigenvalue(const std::vector<Mat>& blocks) const {
  double lo = kInf;
  for (const auto& g : lmis) lo = std::min(lo, linalg::min_eigenvalue(g.evaluate(blocks)));
  return lo;
}

Barrier::Barrier(const MaxDetProblem& problem) : problem_(problem) {
  offsets_.reserve(problem.block_dims.size());
  for (int d : problem.block_dims) {
    offsets_.push_back(num_vars_);
    num_vars_ += d * (d + 1) / 2;
  }
  budget_coeffs_ = Vec::Zero(num_vars_);
  for (const auto& [block, weight] : problem.budget.weights) {
    const int d = problem.block_dims[static_cast<std::size_t>(block)];
    int k = offsets_[static_cast<std::size_t>(block)];
    for (int j = 0; j < d; ++j) {
      for (int i = j; i < d; ++i, ++k) {
        budget_coeffs_(k) += (i == j) ? weight(i, i) : weight(i, j) + weight(j, i);
      }
    }
  }
}

Vec Barrier::pack(const std::vector<Mat>& blocks) const {
  Vec z(num_vars_);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int d = problem_.block_dims[b];
    int k = offsets_[b];
    for (int j = 0; j < d; ++j) {
      for (int i = j; i < d; ++i, ++k) z(k) = 0.5 * (blocks[b](i, j) + blocks[b](j, i));
    }
  }
  return z;
}

std::vector<Mat> Barrier::unpack(const Vec& z) const {
  std::vector<Mat> blocks;
  blocks.reserve(problem_.block_dims.size());
  for (std::size_t b = 0; b < problem_.block_dims.size(); ++b) {
    const int d = problem_.block_dims[b];
    Mat X(d, d);
    int k = offsets_[b];
    for (int j = 0; j < d; ++j) {
      for (int i = j; i < d; ++i, ++k) {
        X(i, j) = z(k);
        X(j, i) = z(k);
      }
    }
    blocks.push_back(std::move(X));
  }
  return blocks;
}

std::optional<double> Barrier::value(const Vec& z, double t) const {
  const std::vector<Mat> blocks = unpack(z);
  double acc = 0.0;
  for (const auto& term : problem_.objective) {
    const auto ld = chol_logdet(term.expr.evaluate(blocks));
    if (!ld) return std::nullopt;
    acc -= t * term.weight * *ld;
  }
  for (const auto& g : problem_.lmis) {
    const auto ld = chol_logdet(g.evaluate(blocks));
    if (!ld) return std::nullopt;
    acc -= *ld;
  }
  const double slack = problem_.budget.bound - problem_.budget.constant - budget_coeffs_.dot(z);
  if (!(slack > 0.0)) return std::nullopt;
  acc -= std::log(slack);
  return acc + t * problem_.constant;
}

template <class Sink>
bool Barrier::accumulate(const Vec& z, double t, Vec& grad, Sink& sink) const {
  const std::vector<Mat> blocks = unpack(z);
  grad.setZero(num_vars_);

  // Adds the derivatives of -w log det F for F affine in the blocks.
  auto add_logdet = [&](const AffineSym& F, double w) -> bool {
    const Mat value = F.evaluate(blocks);
    Eigen::LLT<Mat> llt(value);
    if (llt.info() != Eigen::Success) return false;
    const Mat G = llt.solve(Mat::Identity(value.rows(), value.cols()));
    std::vector<Mat> GU;
    GU.reserve(F.terms.size());
    for (const auto& term : F.terms) GU.push_back(G * term.U);

    for (std::size_t a = 0; a < F.terms.size(); ++a) {
      const auto& ta = F.terms[a];
      const int da = problem_.block_dims[static_cast<std::size_t>(ta.block)];
      const int oa = offsets_[static_cast<std::size_t>(ta.block)];
      // Gradient: -w * sign * Tr(G U E_ij U^T).
      const Mat Z = ta.U.transpose() * GU[a];
      int k = oa;
      for (int j = 0; j < da; ++j) {
        for (int i = j; i < da; ++i, ++k) {
          grad(k) -= w * ta.sign * ((i == j) ? Z(i, i) : Z(i, j) + Z(j, i));
        }
      }
      // Hessian: w * s_a * s_b * Tr(E_ij M E_rc M^T) with M = U_a^T G U_b.
      for (std::size_t b = 0; b < F.terms.size(); ++b) {
        const auto& tb = F.terms[b];
        const int db = problem_.block_dims[static_cast<std::size_t>(tb.block)];
        const int ob = offsets_[static_cast<std::size_t>(tb.block)];
        const Mat M = ta.U.transpose() * GU[b];
        const double coef = w * ta.sign * tb.sign;
        int ka = oa;
        for (int j = 0; j < da; ++j) {
          for (int i = j; i < da; ++i, ++ka) {
            int kb = ob;
            for (int c = 0; c < db; ++c) {
              for (int r = c; r < db; ++r, ++kb) {
                double v;
                if (i == j) {
                  v = (r == c) ? M(i, r) * M(i, r) : 2.0 * M(i, r) * M(i, c);
                } else if (r == c) {
                  v = 2.0 * M(i, r) * M(j, r);
                } else {
                  v = 2.0 * (M(j, r) * M(i, c) + M(j, c) * M(i, r));
                }
                sink.add(ka, kb, coef * v);
              }
            }
          }
        }
      }
    }
    return true;
  };

  for (const auto& term : problem_.objective) {
    if (!add_logdet(term.expr, t * term.weight)) return false;
  }
  for (const auto& g : problem_.lmis) {
    if (!add_logdet(g, 1.0)) return false;
  }

  const double slack = problem_.budget.bound - problem_.budget.constant - budget_coeffs_.dot(z);
  if (!(slack > 0.0)) return false;
  grad += budget_coeffs_ / slack;
  const double inv2 = 1.0 / (slack * slack);
  for (int i = 0; i < num_vars_; ++i) {
    if (budget_coeffs_(i) == 0.0) continue;
    for (int j = 0; j < num_vars_; ++j) {
      if (budget_coeffs_(j) == 0.0) continue;
      sink.add(i, j, budget_coeffs_(i) * budget_coeffs_(j) * inv2);
    }
  }
  return true;
}

bool Barrier::derivatives(const Vec& z, double t, Vec& grad, Mat& hess) const {
  hess.setZero(num_vars_, num_vars_);
  DenseSink sink{hess};
  return accumulate(z, t, grad, sink);
}

bool Barrier::derivatives(const Vec& z, double t, Vec& grad,
                          Eigen::SparseMatrix<double>& hess) const {
  std::vector<Eigen::Triplet<double>> entries;
  TripletSink sink{entries};
  if (!accumulate(z, t, grad, sink)) return false;
  hess.resize(num_vars_, num_vars_);
  hess.setFromTriplets(entries.begin(), entries.end());
  return true;
}

namespace {

/// Newton direction -H^{-1} g; empty vector when the factorization fails.
Vec newton_direction(const Barrier& barrier, const Vec& z, double t, bool sparse, Vec& grad,
                     bool& feasible) {
  feasible = true;
  if (!sparse) {
    Mat H;
    if (!barrier.derivatives(z, t, grad, H)) {
      feasible = false;
      return Vec();
    }
    Eigen::LLT<Mat> llt(H);
    if (llt.info() == Eigen::Success) return -llt.solve(grad);
    Eigen::LDLT<Mat> ldlt(H);
    if (ldlt.info() == Eigen::Success) return -ldlt.solve(grad);
    return Vec();
  }
  Eigen::SparseMatrix<double> H;
  if (!barrier.derivatives(z, t, grad, H)) {
    feasible = false;
    return Vec();
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
  if (ldlt.info() != Eigen::Success) return Vec();
  Vec dx = -ldlt.solve(grad);
  if (ldlt.info() != Eigen::Success) return Vec();
  return dx;
}

}  // namespace

BarrierResult minimize(const MaxDetProblem& problem, const std::vector<Mat>& start,
                       const BarrierOptions& opts) {
  if (start.size() != problem.block_dims.size()) {
    throw InvalidModel("minimize: start point has the wrong number of blocks");
  }
  const Barrier barrier(problem);
  const bool sparse = barrier.num_variables() > opts.dense_limit;
  const double nu = static_cast<double>(problem.barrier_degree());
  Vec z = barrier.pack(start);
  double t = opts.t0;
  if (!barrier.value(z, t)) {
    throw NumericalError("minimize: start point is not strictly feasible");
  }

  BarrierResult result;
  for (;;) {
    ++result.outer_iterations;
    double lam2_best = kInf;
    int stalls = 0;
    double lam2_half = kInf;
    for (;;) {
      Vec grad;
      bool feasible = true;
      const Vec dx = newton_direction(barrier, z, t, sparse, grad, feasible);
      if (!feasible) throw NumericalError("minimize: iterate left the feasible region");
      if (dx.size() == 0) break;  // Newton system could not be factored; keep current center.
      const double lam2 = std::abs(grad.dot(dx));
      lam2_half = 0.5 * lam2;
      if (lam2_half < opts.newton_tol) break;
      if (result.newton_iterations >= opts.max_newton) {
        result.blocks = barrier.unpack(z);
        result.objective = problem.objective_value(result.blocks);
        result.kkt = {problem.min_lmi_eigenvalue(result.blocks),
                      problem.budget.bound - problem.budget.evaluate(result.blocks), lam2_half, t,
                      nu / t};
        result.converged = false;
        return result;
      }

      double step = 1.0;
      bool accepted = false;
      if (std::sqrt(lam2) >= 0.25) {
        const double f0 = *barrier.value(z, t);
        const double slope = grad.dot(dx);
        while (step > 1e-20) {
          const auto f = barrier.value(z + step * dx, t);
          if (f && *f <= f0 + opts.armijo * step * slope) {
            accepted = true;
            // An ill-conditioned Hessian can keep the decrement above the
            // damped threshold while the accepted decrease is pure roundoff.
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(1.0, std::abs(f0));
            stalls = (f0 - *f <= floor) ? stalls + 1 : 0;
            break;
          }
          step *= opts.shrink;
        }
      } else {
        // Quadratic-convergence region: pure Newton, backtracking only for
        // strict feasibility.  Barrier values are not compared here because at
        // large t their differences sink below rounding error.
        while (step > 1e-20) {
          if (barrier.value(z + step * dx, t)) {
            accepted = true;
            break;
          }
          step *= opts.shrink;
        }
        // Near the rounding floor the decrement cycles instead of shrinking;
        // count steps that fail to halve the best value seen so far.
        stalls = (lam2 > 0.5 * lam2_best) ? stalls + 1 : 0;
      }
      if (!accepted) break;
      z += step * dx;
      ++result.newton_iterations;
      lam2_best = std::min(lam2_best, lam2);
      if (stalls >= 5) break;
    }

    result.kkt.newton_decrement = lam2_half;
    result.kkt.barrier_t = t;
    result.kkt.gap_bound = nu / t;
    if (nu / t < opts.tol) {
      result.converged = true;
      break;
    }
    t *= opts.mu_factor;
  }

  result.blocks = barrier.unpack(z);
  result.objective = problem.objective_value(result.blocks);
  result.kkt.min_lmi_eigenvalue = problem.min_lmi_eigenvalue(result.blocks);
  result.kkt.budget_slack = problem.budget.bound - problem.budget.evaluate(result.blocks);
  return result;
}

}  // namespace lqgsi::sdp
