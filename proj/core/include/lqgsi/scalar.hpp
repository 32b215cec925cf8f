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

namespace lqgsi::scalar {

// Closed-form solution of the scalar problem with Q = R = 1.

/// Positive root of the scalar control Riccati equation.  Requires |A| > 1;
/// throws OutOfScope otherwise.
double sbar(double A, double B);

/// Theta = (A B S)^2 / (1 + B^2 S).
double theta(double A, double B, double S);

/// Controller gain A B S / (1 + B^2 S).
double gain(double A, double B, double S);

/// Positive root of A^2 snr P^2 + (1 - A^2 + snr W) P - W = 0, the stationary
/// error variance of the filter that uses only the free observation.  Returns
/// +inf when snr = 0 and |A| >= 1.
double pstar(double A, double W, double snr);

/// g(P) = P (snr + 1 / (A^2 P + W)); increasing in P with g(pstar) = 1.
double g(double P, double A, double W, double snr);

/// Everything needed to evaluate the optimal rate of one scalar instance.
struct ScalarSolution {
  double A = 0.0;
  double B = 0.0;
  double W = 0.0;
  double snr = 0.0;  ///< C^2 / V
  double sbar = 0.0;
  double theta = 0.0;
  double gain = 0.0;
  double pstar = 0.0;
  double gamma_min = 0.0;        ///< W sbar
  double gamma_threshold = 0.0;  ///< W sbar + theta pstar; rate is zero from here on

  /// Budget reparametrization d = (gamma - W sbar) / theta.
  double d(double gamma) const;
  /// Optimal error variance min{d, pstar}.
  double optimal_P(double gamma) const;
  /// Optimal rate in nats.  Throws InfeasibleBudget when gamma <= W sbar.
  double rate_nats(double gamma) const;
  /// Same value through -1/2 log g(d).
  double rate_nats_via_g(double gamma) const;
};

/// Requires |A| > 1, W > 0 and V > 0 (C = 0 encodes no side information).
ScalarSolution solve(double A, double B, double W, double C, double V);

/// Shortcut for solve(A, B, W, C, V).rate_nats(gamma).
double rate_scalar(double A, double B, double W, double C, double V, double gamma);

}  // namespace lqgsi::scalar
