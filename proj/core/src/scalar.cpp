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
#include "lqgsi/scalar.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lqgsi/error.hpp"

namespace lqgsi::scalar {

namespace {

/// Positive root of a x^2 + b x - c = 0 with a, c >= 0, avoiding cancellation.
double positive_root(double a, double b, double c) {
  if (a == 0.0) return b > 0.0 ? c / b : std::numeric_limits<double>::infinity();
  const double disc = std::sqrt(b * b + 4.0 * a * c);
  return b >= 0.0 ? 2.0 * c / (b + disc) : (-b + disc) / (2.0 * a);
}

}  // namespace

double sbar(double A, double B) {
  if (!(std::abs(A) > 1.0)) {
    std::ostringstream msg;
    msg << "scalar closed form needs |A| > 1 (got A = " << A << "); use solve_dare";
    throw OutOfScope(msg.str());
  }
  // B^2 S^2 - (A^2 + B^2 - 1) S - 1 = 0.
  return positive_root(B * B, -(A * A + B * B - 1.0), 1.0);
}

double theta(double A, double B, double S) {
  const double k = A * B * S;
  return k * k / (1.0 + B * B * S);
}

double gain(double A, double B, double S) { return A * B * S / (1.0 + B * B * S); }

double pstar(double A, double W, double snr) {
  const double a = A * A * snr;
  const double b = 1.0 - A * A + snr * W;
  if (a == 0.0 && b <= 0.0) return std::numeric_limits<double>::infinity();
  return positive_root(a, b, W);
}

double g(double P, double A, double W, double snr) { return P * (snr + 1.0 / (A * A * P + W)); }

double ScalarSolution::d(double gamma) const { return (gamma - gamma_min) / theta; }

double ScalarSolution::optimal_P(double gamma) const { return std::min(d(gamma), pstar); }

double ScalarSolution::rate_nats(double gamma) const {
  if (gamma <= gamma_min) {
    std::ostringstream msg;
    msg << "budget " << gamma << " is not above gamma_min = " << gamma_min;
    throw InfeasibleBudget(msg.str(), gamma_min);
  }
  if (gamma >= gamma_threshold) return 0.0;
  const double excess = gamma - gamma_min;
  const double value = 0.5 * std::log(A * A + W * theta / excess) -
                       0.5 * std::log(1.0 + snr * (W + A * A * excess / theta));
  return std::max(value, 0.0);
}

double ScalarSolution::rate_nats_via_g(double gamma) const {
  if (gamma <= gamma_min) {
    throw InfeasibleBudget("budget is not above gamma_min", gamma_min);
  }
  if (gamma >= gamma_threshold) return 0.0;
  return -0.5 * std::log(g(d(gamma), A, W, snr));
}

ScalarSolution solve(double A, double B, double W, double C, double V) {
  if (!(W > 0.0) || !(V > 0.0)) throw InvalidModel("scalar closed form needs W > 0 and V > 0");
  ScalarSolution s;
  s.A = A;
  s.B = B;
  s.W = W;
  s.snr = C * C / V;
  s.sbar = sbar(A, B);
  s.theta = theta(A, B, s.sbar);
  s.gain = gain(A, B, s.sbar);
  s.pstar = pstar(A, W, s.snr);
  s.gamma_min = W * s.sbar;
  s.gamma_threshold = s.gamma_min + s.theta * s.pstar;
  return s;
}

double rate_scalar(double A, double B, double W, double C, double V, double gamma) {
  return solve(A, B, W, C, V).rate_nats(gamma);
}

}  // namespace lqgsi::scalar
