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
#include "lqgsi/tradeoff.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <thread>

#include "lqgsi/error.hpp"

namespace lqgsi {

std::string TradeoffPoint::status_label() const { return error.empty() ? to_string(status) : "error"; }

std::vector<TradeoffPoint> sweep(const SystemModel& model, const CostModel& cost,
                                 std::span<const double> gammas, const SolveOptions& opts,
                                 int jobs) {
  std::vector<TradeoffPoint> points(gammas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < gammas.size(); i = next++) {
      TradeoffPoint& pt = points[i];
      pt.gamma = gammas[i];
      CostModel c = cost;
      c.gamma = gammas[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const SdpSolution sol = solve(model, c, opts);
        pt.status = sol.status;
        pt.rate_nats = sol.status == SolveStatus::InfeasibleBudget
                           ? std::numeric_limits<double>::quiet_NaN()
                           : sol.objective_nats;
        pt.newton_iterations = sol.newton_iterations;
      } catch (const std::exception& e) {
        pt.error = e.what();
        pt.rate_nats = std::numeric_limits<double>::quiet_NaN();
      }
      pt.rate_bits = pt.rate_nats / std::numbers::ln2;
      pt.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(gammas.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const TradeoffPoint& a, const TradeoffPoint& b) { return a.gamma < b.gamma; });
  return points;
}

std::vector<double> gamma_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InvalidModel("gamma_grid: need step > 0 and hi >= lo");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffPoint>& points) {
  os << "# lqgsi-tradeoff v1\n";
  os << "gamma,rate_bits,rate_nats,status,newton_iterations,wall_seconds\n";
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(12);
  for (const auto& p : points) {
    os << p.gamma << ',' << p.rate_bits << ',' << p.rate_nats << ',' << p.status_label() << ','
       << p.newton_iterations << ',' << std::setprecision(6) << p.wall_seconds
       << std::setprecision(12) << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace lqgsi
