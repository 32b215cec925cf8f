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
#include "lqgsi/model.hpp"

#include <cmath>
#include <sstream>

#include "lqgsi/error.hpp"

namespace lqgsi {

Horizon Horizon::finite(int steps) {
  if (steps < 1) throw InvalidModel("finite horizon requires T >= 1");
  return Horizon(steps);
}

const Mat& at_step(const MatSeq& seq, int t) {
  if (seq.empty()) throw InvalidModel("empty matrix sequence");
  if (seq.size() == 1) return seq.front();
  if (t < 0 || static_cast<std::size_t>(t) >= seq.size()) {
    throw InvalidModel("step index out of range for matrix sequence");
  }
  return seq[static_cast<std::size_t>(t)];
}

bool SystemModel::time_invariant() const {
  return A.size() == 1 && B.size() == 1 && C.size() == 1 && W.size() == 1 && V.size() == 1;
}

SystemModel SystemModel::stationary(Mat A, Mat B, Mat C, Mat W, Mat V, Mat P_init) {
  SystemModel m;
  m.horizon = Horizon::infinite();
  m.A = {std::move(A)};
  m.B = {std::move(B)};
  m.C = {std::move(C)};
  m.W = {std::move(W)};
  m.V = {std::move(V)};
  m.P_init = std::move(P_init);
  return m;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

namespace {

constexpr double kAsymmetryTol = 1e-9;
constexpr double kPsdTol = 1e-9;

std::string dims(const Mat& X) {
  std::ostringstream os;
  os << X.rows() << "x" << X.cols();
  return os.str();
}

class Checker {
 public:
  explicit Checker(ValidationReport& r) : report_(r) {}

  void fail(const std::string& msg) { report_.violations.push_back(msg); }

  bool sequence(const std::string& name, const MatSeq& seq, const Horizon& h) {
    if (seq.empty()) {
      fail(name + " missing");
      return false;
    }
    if (seq.size() != 1) {
      if (h.is_infinite()) {
        fail(name + " must be a single matrix for an infinite horizon");
        return false;
      }
      if (static_cast<int>(seq.size()) != h.steps()) {
        fail(name + " sequence length " + std::to_string(seq.size()) + " does not match T=" +
             std::to_string(h.steps()));
        return false;
      }
    }
    return true;
  }

  void shape(const std::string& name, const MatSeq& seq, Eigen::Index rows, Eigen::Index cols) {
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (seq[t].rows() != rows || seq[t].cols() != cols) {
        fail(label(name, seq, t) + " has shape " + dims(seq[t]) + ", expected " +
             std::to_string(rows) + "x" + std::to_string(cols));
      }
    }
  }

  void definite(const std::string& name, const MatSeq& seq, bool strict) {
    for (std::size_t t = 0; t < seq.size(); ++t) definite(label(name, seq, t), seq[t], strict);
  }

  void definite(const std::string& name, const Mat& X, bool strict) {
    if (X.rows() != X.cols() || X.size() == 0) return;
    if (!X.allFinite()) {
      fail(name + " has non-finite entries");
      return;
    }
    if (linalg::relative_asymmetry(X) > kAsymmetryTol) {
      fail(name + " not symmetric");
      return;
    }
    if (strict) {
      if (!linalg::is_pd(X)) fail(name + " not PD");
    } else if (!linalg::is_psd(X, kPsdTol)) {
      fail(name + " not PSD");
    }
  }

  void finite(const std::string& name, const MatSeq& seq) {
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (!seq[t].allFinite()) fail(label(name, seq, t) + " has non-finite entries");
    }
  }

 private:
  static std::string label(const std::string& name, const MatSeq& seq, std::size_t t) {
    return seq.size() == 1 ? name : name + "[" + std::to_string(t) + "]";
  }

  ValidationReport& report_;
};

}  // namespace

ValidationReport validate(const SystemModel& model, const CostModel& cost) {
  ValidationReport report;
  Checker check(report);
  const Horizon& h = model.horizon;

  const bool haveA = check.sequence("A", model.A, h);
  const bool haveB = check.sequence("B", model.B, h);
  const bool haveC = check.sequence("C", model.C, h);
  const bool haveW = check.sequence("W", model.W, h);
  const bool haveV = check.sequence("V", model.V, h);
  const bool haveQ = check.sequence("Q", cost.Q, h);
  const bool haveR = check.sequence("R", cost.R, h);
  if (!haveA) return report;

  const Eigen::Index n = model.A.front().rows();
  const Eigen::Index m = haveB ? model.B.front().cols() : 0;
  const Eigen::Index p = haveC ? model.C.front().rows() : 0;

  check.shape("A", model.A, n, n);
  check.finite("A", model.A);
  if (haveB) {
    check.shape("B", model.B, n, m);
    check.finite("B", model.B);
  }
  if (haveC) {
    check.shape("C", model.C, p, n);
    check.finite("C", model.C);
  }
  if (haveW) {
    check.shape("W", model.W, n, n);
    check.definite("W", model.W, false);
  }
  if (haveV) {
    check.shape("V", model.V, p, p);
    if (p > 0) check.definite("V", model.V, true);
  }
  if (haveQ) {
    check.shape("Q", cost.Q, n, n);
    check.definite("Q", cost.Q, false);
  }
  if (haveR) {
    check.shape("R", cost.R, m, m);
    check.definite("R", cost.R, true);
  }
  if (model.P_init.rows() != n || model.P_init.cols() != n) {
    check.fail("P_init has shape " + dims(model.P_init) + ", expected " + std::to_string(n) + "x" +
               std::to_string(n));
  } else {
    check.definite("P_init", model.P_init, false);
  }
  if (!(cost.gamma > 0.0) || !std::isfinite(cost.gamma)) check.fail("gamma must be finite and > 0");
  return report;
}

void require_valid(const SystemModel& model, const CostModel& cost) {
  const ValidationReport r = validate(model, cost);
  if (!r.ok()) throw InvalidModel("invalid problem instance: " + r.summary());
}

double stabilization_rate_bits(const Mat& A) {
  double bits = 0.0;
  for (const auto& lambda : linalg::eigenvalues_by_modulus(A)) {
    bits += std::log2(std::max(1.0, std::abs(lambda)));
  }
  return bits;
}

bool is_stabilizable(const Mat& A, const Mat& B) {
  for (const auto& lambda : linalg::eigenvalues_by_modulus(A)) {
    if (std::abs(lambda) < 1.0) break;
    if (!linalg::pbh_full_rank(A, B, lambda, true)) return false;
  }
  return true;
}

bool is_detectable(const Mat& A, const Mat& C) {
  for (const auto& lambda : linalg::eigenvalues_by_modulus(A)) {
    if (std::abs(lambda) < 1.0) break;
    if (!linalg::pbh_full_rank(A, C, lambda, false)) return false;
  }
  return true;
}

bool is_observable_on_unit_circle(const Mat& A, const Mat& Csqrt, double band) {
  for (const auto& lambda : linalg::eigenvalues_by_modulus(A)) {
    const double r = std::abs(lambda);
    if (r < 1.0 - band || r > 1.0 + band) continue;
    if (!linalg::pbh_full_rank(A, Csqrt, lambda, false)) return false;
  }
  return true;
}

SpectralReport spectral_report(const SystemModel& model, const Mat& Q) {
  if (!model.horizon.is_infinite() || !model.time_invariant()) {
    throw UnsupportedOperation("spectral_report requires a time-invariant infinite-horizon model");
  }
  const Mat& A = model.A.front();
  SpectralReport r;
  r.eigenvalues = linalg::eigenvalues_by_modulus(A);
  r.stabilization_rate_bits = stabilization_rate_bits(A);
  r.stabilizable = is_stabilizable(A, model.B.front());
  r.detectable_y = is_detectable(A, model.C.front());
  r.observable_Q = Q.size() == 0 ? false : is_observable_on_unit_circle(A, linalg::sqrt_psd(Q));
  return r;
}

}  // namespace lqgsi
