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

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lqgsi/model.hpp"
#include "lqgsi/sdp.hpp"

namespace lqgsi {

struct TradeoffPoint {
  double gamma = 0.0;
  double rate_nats = 0.0;
  double rate_bits = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  int newton_iterations = 0;
  double wall_seconds = 0.0;
  std::string error;  ///< non-empty when the point could not be solved

  std::string status_label() const;
};

/// Solves one program per budget; points are independent and may run on
/// `jobs` threads.  The result is sorted by gamma.  Failing points are kept
/// with their error message.
std::vector<TradeoffPoint> sweep(const SystemModel& model, const CostModel& cost,
                                 std::span<const double> gammas, const SolveOptions& opts = {},
                                 int jobs = 1);

/// Evenly spaced budgets lo, lo + step, ..., up to hi (inclusive within 1e-9).
std::vector<double> gamma_grid(double lo, double hi, double step);

/// CSV with a "# lqgsi-tradeoff v1" first line, then
/// gamma,rate_bits,rate_nats,status,newton_iterations,wall_seconds.
void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffPoint>& points);

}  // namespace lqgsi
