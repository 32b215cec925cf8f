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

#include <cstdint>
#include <ostream>
#include <vector>

#include "lqgsi/linalg.hpp"
#include "lqgsi/model.hpp"
#include "lqgsi/synthesis.hpp"

namespace lqgsi {

struct SimConfig {
  /// Stationary policies: total steps after which the run stops, split over
  /// the batches (each batch repeats the burn-in).  Finite policies: must equal T.
  long steps = 200000;
  long burn_in = 1000;
  std::uint64_t seed = 1;
  int batches = 10;
  /// Finite policies only: independent episodes per batch.
  int episodes_per_batch = 100;
  /// Worker threads; results do not depend on this value.
  int threads = 1;
  /// When set, batch 0 writes t, x, u and the cost increment here as CSV.
  std::ostream* trajectory = nullptr;
};

struct SimReport {
  bool stationary = true;
  /// Stationary: average cost per step.  Finite: average total cost per episode.
  double avg_cost = 0.0;
  double cost_stderr = 0.0;  ///< from the spread of batch means
  std::vector<double> batch_means;
  Mat error_covariance;      ///< E[(x - xhat)(x - xhat)^T] after burn-in
  double predicted_cost = 0.0;
  Mat predicted_P;
  double state_norm_mean = 0.0;
  double state_norm_max = 0.0;
  /// Largest |lag-1 autocorrelation| over the innovation components.
  double innovation_lag1_corr = 0.0;
  int q = 0;  ///< largest encoder dimension over the horizon
  long steps_per_batch = 0;
  long recorded_steps = 0;
  std::uint64_t seed = 0;
};

/// Runs the closed loop x' = A x + B u + w, y = C x + v, f = D x + m,
/// u = -K xhat.  Deterministic in (model, policy, cfg) regardless of threads.
/// Throws Divergence when |x| exceeds 1e12.
SimReport simulate(const SystemModel& model, const Policy& policy, const SimConfig& cfg);

/// Per-step rate 1/2 log det(I + P_plus snrF) at the limit of the filter
/// covariance recursion started from P_init.  Throws NumericalError when the
/// recursion has not settled after max_steps.
double empirical_rate(const SystemModel& model, const Policy& policy, int max_steps = 10000);

}  // namespace lqgsi
